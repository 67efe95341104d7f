#ifndef SPLITLAB_CENTER_CURVE_HPP
#define SPLITLAB_CENTER_CURVE_HPP

#include <vector>

#include "splitlab/map_spec.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab {

// Explicit Euler polyline of a continuous unit field subordinate to one of
// the computed bundles, built by nearest-vector continuation: at each node
// the direction is the bundle's basis applied to the least-squares
// coefficients of the previous direction, renormalized.
struct BundleCurve {
  std::vector<TorusPoint> points;
  std::vector<Vec> directions;  // unit field value at each node
  double step = 0.0;
  int base_index = 0;  // points[base_index] is the start, parameter 0

  double param_of(int idx) const { return (idx - base_index) * step; }
  int size() const { return static_cast<int>(points.size()); }
  // Node whose parameter is t; t must sit on the step lattice.
  int index_at(double t) const;
  BundleCurve reversed() const;
};

// Curve through p tangent to the chosen bundle (C or S), initial direction
// the normalized projection of v.  Forward only: points[0] = p.
BundleCurve bundle_curve(const MapSpec& map, const TorusPoint& p, const Vec& v,
                         double step, int n_steps, BundleTag which, SplitDims dims,
                         int n_push = 60);

inline BundleCurve center_curve(const MapSpec& map, const TorusPoint& p, const Vec& v,
                                double step, int n_steps, SplitDims dims,
                                int n_push = 60) {
  return bundle_curve(map, p, v, step, n_steps, BundleTag::C, dims, n_push);
}

// Two-sided curve over [-n_steps, n_steps], built from the +v and -v
// forward curves; base_index = n_steps.
BundleCurve symmetric_bundle_curve(const MapSpec& map, const TorusPoint& p,
                                   const Vec& v, double step, int n_steps,
                                   BundleTag which, SplitDims dims, int n_push = 60);

// Central difference of the graph coordinates of E^u over the reference
// splitting at the curve's base point: (P(+h) - P(-h)) / 2h, a map
// E^u-frame -> E^cs-frame.  h must sit on the curve's step lattice and the
// curve must span [-h, h] around its base.
Mat fd_derivative_along_curve(const MapSpec& map, const BundleCurve& curve, double h,
                              SplitDims dims, int n_push = 60);

// Log-log regression of plane_distance(E^u_{gamma(t)}, E^u_p) against t
// over the given scales, for a curve tangent to the center or stable
// bundle.  flat is set when every distance sits at the noise floor.
struct RegularityReport {
  std::vector<double> scales;     // actual parameters used (step lattice)
  std::vector<double> distances;  // plane distances at those parameters
  double slope = 0.0;
  double fit_residual = 0.0;  // rms residual in log-log space
  bool flat = false;
};

enum class CurveDirection { Center, Stable };

RegularityReport regularity_estimate(const MapSpec& map, const TorusPoint& p,
                                     CurveDirection direction,
                                     const std::vector<double>& scales,
                                     SplitDims dims, int n_push = 60,
                                     double step = 1.0 / 4096.0);

}  // namespace splitlab

#endif  // SPLITLAB_CENTER_CURVE_HPP
