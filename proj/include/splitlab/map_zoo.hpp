#ifndef SPLITLAB_MAP_ZOO_HPP
#define SPLITLAB_MAP_ZOO_HPP

#include <map>
#include <string>
#include <variant>

#include "splitlab/map_spec.hpp"

namespace splitlab {

// (sqrt(5)-1)/2, the default rotation number.
inline constexpr double kGoldenAlpha = 0.61803398874989485;

// x |-> A x mod 1 for an integer unimodular matrix A (default the cat map
// [[2,1],[1,1]]).  Exact inverse; splitting dims from the eigenvalues.
MapSpec make_linear_toral(const Eigen::MatrixXi& a);
MapSpec make_linear_toral();

// (x,y,theta) |-> (2x+y, x+y, theta+alpha) on T^3.
MapSpec make_skew_product(double alpha = kGoldenAlpha);

// (x,y,theta) |-> (2x+y+eps sin 2pi theta, x+y, theta+alpha+eps sin 2pi x).
// Rejects eps at which the derivative-norm check fails.
MapSpec make_perturbed_skew(double eps, double alpha = kGoldenAlpha);

// The shear p |-> p + amplitude sin(2 pi p_src) e_tgt.  Exactly invertible
// because the target coordinate never feeds back into the source.
MapSpec make_shear(int dim, int tgt, int src, double amplitude);

// f_t = psi_t . base . psi_t^{-1} with psi_t the shear by t*w.
// base "skew_product": w = (0,0,amplitude sin 2pi x) on T^3.
// base "linear_toral": w = (0, delta sin 2pi x) on T^2 over the cat map.
FamilySpec make_conjugated_family(const std::string& base = "skew_product",
                                  double amplitude = 1.0);

// f_t = skew product with alpha replaced by alpha + t.
FamilySpec make_rotation_family(double alpha = kGoldenAlpha);

using ZooEntry = std::variant<MapSpec, FamilySpec>;

// Name-and-parameter-table front end used by the CLI.  Known names:
// linear_toral, skew_product, perturbed_skew, conjugated_family,
// rotation_family.  Unknown names and unknown parameter keys are rejected.
ZooEntry map_zoo(const std::string& name,
                 const std::map<std::string, std::string>& params = {});

}  // namespace splitlab

#endif  // SPLITLAB_MAP_ZOO_HPP
