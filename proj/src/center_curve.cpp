#include "splitlab/center_curve.hpp"

#include <algorithm>
#include <cmath>

#include "splitlab/errors.hpp"
#include "splitlab/graph_coords.hpp"

namespace splitlab {

int BundleCurve::index_at(double t) const {
  double raw = t / step;
  int offset = static_cast<int>(std::lround(raw));
  if (std::abs(raw - offset) > 1e-9)
    throw PreconditionError("BundleCurve: parameter not on the step lattice");
  int idx = base_index + offset;
  if (idx < 0 || idx >= size())
    throw PreconditionError("BundleCurve: parameter outside the curve");
  return idx;
}

BundleCurve BundleCurve::reversed() const {
  BundleCurve out;
  out.points.assign(points.rbegin(), points.rend());
  for (auto it = directions.rbegin(); it != directions.rend(); ++it)
    out.directions.push_back(-*it);
  out.step = step;
  out.base_index = size() - 1 - base_index;
  return out;
}

namespace {

Plane bundle_plane_at(const MapSpec& map, const TorusPoint& q, BundleTag which,
                      SplitDims dims, int n_push) {
  switch (which) {
    case BundleTag::C:
      return center_plane(map, q, dims, n_push);
    case BundleTag::S:
      return stable_plane(map, q, dims.s, n_push);
    case BundleTag::U:
      return unstable_plane(map, q, dims.u, n_push);
    default:
      throw PreconditionError("bundle_curve: unsupported bundle tag");
  }
}

}  // namespace

BundleCurve bundle_curve(const MapSpec& map, const TorusPoint& p, const Vec& v,
                         double step, int n_steps, BundleTag which, SplitDims dims,
                         int n_push) {
  if (step <= 0.0 || step > 1e-2)
    throw PreconditionError("bundle_curve: step must be in (0, 1e-2]");
  if (n_steps < 0) throw PreconditionError("bundle_curve: n_steps must be >= 0");

  BundleCurve curve;
  curve.step = step;
  curve.base_index = 0;
  curve.points.push_back(p);

  Plane plane = bundle_plane_at(map, p, which, dims, n_push);
  Vec dir = plane.project(v);
  if (dir.norm() < 1e-12)
    throw PreconditionError("bundle_curve: v has no component along the bundle");
  dir.normalize();
  curve.directions.push_back(dir);

  for (int k = 0; k < n_steps; ++k) {
    TorusPoint next = translate(curve.points.back(), step * dir);
    Plane next_plane = bundle_plane_at(map, next, which, dims, n_push);
    Vec cont = next_plane.project(dir);  // nearest-vector continuation
    if (cont.norm() < 1e-12)
      throw DegeneracyError("bundle_curve: continuation lost the bundle component",
                            cont.norm());
    dir = cont.normalized();
    curve.points.push_back(next);
    curve.directions.push_back(dir);
  }
  return curve;
}

BundleCurve symmetric_bundle_curve(const MapSpec& map, const TorusPoint& p,
                                   const Vec& v, double step, int n_steps,
                                   BundleTag which, SplitDims dims, int n_push) {
  BundleCurve plus = bundle_curve(map, p, v, step, n_steps, which, dims, n_push);
  BundleCurve minus = bundle_curve(map, p, -v, step, n_steps, which, dims, n_push);
  BundleCurve out;
  out.step = step;
  out.base_index = n_steps;
  for (int i = n_steps; i >= 1; --i) {
    out.points.push_back(minus.points[static_cast<std::size_t>(i)]);
    out.directions.push_back(-minus.directions[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i <= n_steps; ++i) {
    out.points.push_back(plus.points[static_cast<std::size_t>(i)]);
    out.directions.push_back(plus.directions[static_cast<std::size_t>(i)]);
  }
  return out;
}

Mat fd_derivative_along_curve(const MapSpec& map, const BundleCurve& curve, double h,
                              SplitDims dims, int n_push) {
  if (h <= 0.0) throw PreconditionError("fd_derivative_along_curve: h must be positive");
  if ((curve.size() - 1) * curve.step < 2.0 * h - 1e-12)
    throw PreconditionError("fd_derivative_along_curve: curve arclength below 2h");
  int plus = curve.index_at(h);
  int minus = curve.index_at(-h);

  const TorusPoint& base = curve.points[static_cast<std::size_t>(curve.base_index)];
  Splitting ref = compute_splitting(map, base, dims, n_push);
  Chart chart = build_chart(ref, grouping_u_cs(dims));

  auto coords_at = [&](int idx) {
    Plane eu = unstable_plane(map, curve.points[static_cast<std::size_t>(idx)], dims.u,
                              n_push);
    // Tangent spaces along the curve are identified by translation; the
    // graph chart is only valid while ||P|| < 1.
    Plane moved(base, eu.basis());
    GraphCoords gc = graph_coords_of(moved, chart, "Eu", "Ecs");
    if (gc.norm() >= 1.0)
      throw ChartOverflowError(
          "fd_derivative_along_curve: graph coordinates left the unit chart; "
          "h too large");
    return gc.p;
  };

  Mat p_plus = coords_at(plus);
  Mat p_minus = coords_at(minus);
  return (p_plus - p_minus) / (2.0 * h);
}

RegularityReport regularity_estimate(const MapSpec& map, const TorusPoint& p,
                                     CurveDirection direction,
                                     const std::vector<double>& scales,
                                     SplitDims dims, int n_push, double step) {
  if (scales.size() < 3)
    throw PreconditionError("regularity_estimate: need at least 3 scales");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (scales[i] >= scales[i - 1])
      throw PreconditionError("regularity_estimate: scales must be strictly decreasing");
  if (scales.back() <= 0.0)
    throw PreconditionError("regularity_estimate: scales must be positive");

  BundleTag which = direction == CurveDirection::Center ? BundleTag::C : BundleTag::S;
  int n_steps = static_cast<int>(std::ceil(scales.front() / step + 0.5));
  // Initial direction: first basis vector of the bundle at p.
  Plane start = direction == CurveDirection::Center
                    ? center_plane(map, p, dims, n_push)
                    : stable_plane(map, p, dims.s, n_push);
  Vec v = start.basis().col(0);
  BundleCurve curve = bundle_curve(map, p, v, step, n_steps, which, dims, n_push);

  Plane eu_base = unstable_plane(map, p, dims.u, n_push);

  RegularityReport report;
  for (double scale : scales) {
    int idx = static_cast<int>(std::lround(scale / step));
    idx = std::min(idx, curve.size() - 1);
    double t = idx * step;
    Plane eu =
        unstable_plane(map, curve.points[static_cast<std::size_t>(idx)], dims.u, n_push);
    // Compare as subspaces of R^d (translation identification).
    double dist = subspace_distance(eu.basis(), eu_base.basis());
    report.scales.push_back(t);
    report.distances.push_back(dist);
  }

  const double kFloor = 1e-13;
  bool any_above = false;
  for (double dist : report.distances) any_above = any_above || dist > kFloor;
  if (!any_above) {
    report.flat = true;
    report.slope = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  // Least squares on log-log pairs, skipping floor-level distances.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < report.scales.size(); ++i) {
    if (report.distances[i] > kFloor) {
      xs.push_back(std::log(report.scales[i]));
      ys.push_back(std::log(report.distances[i]));
    }
  }
  if (xs.size() < 3)
    throw PreconditionError("regularity_estimate: fewer than 3 scales above the floor");
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  report.slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - report.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (report.slope * xs[i] + intercept);
    ss += r * r;
  }
  report.fit_residual = std::sqrt(ss / n);
  return report;
}

}  // namespace splitlab
