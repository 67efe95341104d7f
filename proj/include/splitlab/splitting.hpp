#ifndef SPLITLAB_SPLITTING_HPP
#define SPLITLAB_SPLITTING_HPP

#include <map>
#include <optional>
#include <vector>

#include "splitlab/chart.hpp"
#include "splitlab/map_spec.hpp"
#include "splitlab/plane.hpp"

namespace splitlab {

enum class BundleTag { U, C, S, CU, CS };

// Orbit of a point with cached jacobians, indexed by signed step count
// (idx 0 is the base point, negative indices use Newton inversion).
// Lazily extended; each instance is confined to one thread.
class OrbitContext {
 public:
  OrbitContext(MapSpec map, TorusPoint p, double newton_tol = 1e-12);

  const MapSpec& map() const { return map_; }
  int dim() const { return map_.dim(); }
  const TorusPoint& point(int idx) const;
  const Mat& jac(int idx) const;
  const Mat& jac_inv(int idx) const;

 private:
  MapSpec map_;
  double newton_tol_;
  mutable std::vector<TorusPoint> fwd_;   // fwd_[k] = f^k p, k >= 0
  mutable std::vector<TorusPoint> back_;  // back_[k] = f^{-k-1} p
  mutable std::map<int, Mat> jac_cache_;
  mutable std::map<int, Mat> jac_inv_cache_;
};

// Push the span of seed forward `steps` steps starting at orbit index
// `from`, re-orthonormalizing by QR after every step; the result is an
// orthonormal basis at index from+steps.  pull_span runs the inverse
// tangent maps and lands at from-steps.
Mat push_span(const OrbitContext& ctx, int from, int steps, const Mat& seed);
Mat pull_span(const OrbitContext& ctx, int from, int steps, const Mat& seed);

// Seed-depth Cauchy increments of an iterated plane, used to flag numerical
// loss of domination: the warning fires when the deepest increment exceeds
// the previous one while still above the noise floor.
struct PushDiagnostics {
  double last_increment = 0.0;
  double prev_increment = 0.0;
  bool noncontraction_warning = false;
};

// Coordinate-axis seed used when no override is supplied.
Mat default_seed(BundleTag which, SplitDims dims, int d);

// The image of a plane under f^steps, re-orthonormalized after every step.
Plane push_plane(const MapSpec& map, const Plane& plane, int steps);

// Strong unstable plane at p: a deterministic u-plane seeded at f^{-N} p
// and pushed forward N steps.  stable_plane runs the inverse map; cu/cs
// use dimensions u+c and c+s.
Plane unstable_plane(const MapSpec& map, const TorusPoint& p, int u, int n,
                     const Mat* seed = nullptr, PushDiagnostics* diag = nullptr);
Plane stable_plane(const MapSpec& map, const TorusPoint& p, int s, int n,
                   const Mat* seed = nullptr, PushDiagnostics* diag = nullptr);
Plane cu_plane(const MapSpec& map, const TorusPoint& p, SplitDims dims, int n,
               const Mat* seed = nullptr, PushDiagnostics* diag = nullptr);
Plane cs_plane(const MapSpec& map, const TorusPoint& p, SplitDims dims, int n,
               const Mat* seed = nullptr, PushDiagnostics* diag = nullptr);

// Intersection of two spans by principal-vector extraction; the number of
// principal cosines within sv_tol of 1 must equal expected_dim.
Mat intersect_spans(const Mat& a, const Mat& b, int expected_dim,
                    double sv_tol = 1e-6);

// E^c = cu_plane(p) intersect cs_plane(p); requires c >= 1.
Plane center_plane(const MapSpec& map, const TorusPoint& p, SplitDims dims, int n);

// The full invariant splitting at a point with declared dimensions.
struct Splitting {
  TorusPoint point;
  SplitDims dims;
  Plane eu;
  std::optional<Plane> ec;  // absent when c = 0
  Plane es;
  std::optional<Plane> cu;  // pushed u+c plane (absent when c = 0)
  std::optional<Plane> cs;  // pulled c+s plane (absent when c = 0)
  double condition_number = 0.0;

  const Plane& cs_or_es() const { return cs ? *cs : es; }
  const Plane& cu_or_eu() const { return cu ? *cu : eu; }
  const Plane& plane(BundleTag which) const;
};

Splitting compute_splitting(const MapSpec& map, const TorusPoint& p, SplitDims dims,
                            int n);

// plane_distance(Tf(E_p), E_fp) for the requested bundle; the primary
// correctness witness for computed bundles.  E_fp is recomputed at f(p).
double invariance_residual(const MapSpec& map, const TorusPoint& p, SplitDims dims,
                           int n, BundleTag which);

// Splittings along the orbit of p, sharing one orbit cache.  at(idx) is
// the splitting of the orbit point f^idx p, each bundle iterated n_push
// steps within the cache.
class OrbitSplittings {
 public:
  OrbitSplittings(const MapSpec& map, const TorusPoint& p, SplitDims dims,
                  int n_push);

  const OrbitContext& ctx() const { return ctx_; }
  SplitDims dims() const { return dims_; }
  int n_push() const { return n_push_; }
  const Splitting& at(int idx) const;

 private:
  OrbitContext ctx_;
  SplitDims dims_;
  int n_push_;
  mutable std::map<int, Splitting> cache_;
};

// Adapted chart at splitting.point: one orthonormal block per group of
// bundle tags, e.g. {{U},{C,S}} builds the (E^u, E^cs) chart.
Chart build_chart(const Splitting& splitting,
                  const std::vector<std::vector<BundleTag>>& grouping,
                  double angle_tol = 1e-8);

// {{U},{C,S}}, degrading to {{U},{S}} when c = 0.
std::vector<std::vector<BundleTag>> grouping_u_cs(const SplitDims& dims);

}  // namespace splitlab

#endif  // SPLITLAB_SPLITTING_HPP
