#include "splitlab/splitting.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "splitlab/errors.hpp"

namespace splitlab {

OrbitContext::OrbitContext(MapSpec map, TorusPoint p, double newton_tol)
    : map_(std::move(map)), newton_tol_(newton_tol) {
  fwd_.push_back(std::move(p));
}

const TorusPoint& OrbitContext::point(int idx) const {
  if (idx >= 0) {
    while (static_cast<int>(fwd_.size()) <= idx)
      fwd_.push_back(map_.eval(fwd_.back()));
    return fwd_[static_cast<std::size_t>(idx)];
  }
  int k = -idx - 1;
  while (static_cast<int>(back_.size()) <= k) {
    const TorusPoint& outer = back_.empty() ? fwd_.front() : back_.back();
    back_.push_back(invert(map_, outer, newton_tol_));
  }
  return back_[static_cast<std::size_t>(k)];
}

const Mat& OrbitContext::jac(int idx) const {
  auto it = jac_cache_.find(idx);
  if (it == jac_cache_.end())
    it = jac_cache_.emplace(idx, map_.jacobian(point(idx))).first;
  return it->second;
}

const Mat& OrbitContext::jac_inv(int idx) const {
  auto it = jac_inv_cache_.find(idx);
  if (it == jac_inv_cache_.end())
    it = jac_inv_cache_.emplace(idx, jac(idx).partialPivLu().inverse()).first;
  return it->second;
}

Mat push_span(const OrbitContext& ctx, int from, int steps, const Mat& seed) {
  Mat b = orthonormalize(seed);
  for (int k = 0; k < steps; ++k) b = orthonormalize(ctx.jac(from + k) * b);
  return b;
}

Mat pull_span(const OrbitContext& ctx, int from, int steps, const Mat& seed) {
  Mat b = orthonormalize(seed);
  for (int k = 1; k <= steps; ++k) b = orthonormalize(ctx.jac_inv(from - k) * b);
  return b;
}

Mat default_seed(BundleTag which, SplitDims dims, int d) {
  std::vector<int> axes;
  switch (which) {
    case BundleTag::U:
      for (int i = 0; i < dims.u; ++i) axes.push_back(i);
      break;
    case BundleTag::S:
      for (int i = 0; i < dims.s; ++i) axes.push_back(i);
      break;
    case BundleTag::CU:
      for (int i = 0; i < dims.u; ++i) axes.push_back(i);
      for (int i = d - dims.c; i < d; ++i) axes.push_back(i);
      break;
    case BundleTag::CS:
      for (int i = d - dims.c - dims.s; i < d; ++i) axes.push_back(i);
      break;
    case BundleTag::C:
      throw PreconditionError("default_seed: the center plane is not seeded, it is intersected");
  }
  Mat seed = Mat::Zero(d, static_cast<int>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) seed(axes[j], static_cast<int>(j)) = 1.0;
  return seed;
}

Plane push_plane(const MapSpec& map, const Plane& plane, int steps) {
  if (steps < 1) throw PreconditionError("push_plane: steps must be >= 1");
  OrbitContext ctx(map, plane.point());
  Mat b = push_span(ctx, 0, steps, plane.basis());
  return Plane(ctx.point(steps), b);
}

namespace {

enum class Direction { Forward, Backward };

// Plane at orbit index idx obtained by iterating `depth` steps from a seed
// placed at idx -/+ depth.  With diagnostics, the planes from depths
// depth-1 and depth-2 are produced as well and the Cauchy increments
// between them recorded.
Plane iterated_plane(const OrbitContext& ctx, int idx, int depth, Direction dir,
                     const Mat& seed, PushDiagnostics* diag) {
  if (depth < 1) throw PreconditionError("iterated_plane: need depth >= 1");
  auto run = [&](int n) {
    return dir == Direction::Forward ? push_span(ctx, idx - n, n, seed)
                                     : pull_span(ctx, idx + n, n, seed);
  };
  Mat full = run(depth);
  if (diag != nullptr && depth >= 3) {
    Mat one_less = run(depth - 1);
    Mat two_less = run(depth - 2);
    diag->last_increment = subspace_distance(full, one_less);
    diag->prev_increment = subspace_distance(one_less, two_less);
    // Below the noise floor the increments only measure QR roundoff.
    diag->noncontraction_warning =
        diag->last_increment > diag->prev_increment && diag->last_increment > 1e-13;
  }
  return Plane(ctx.point(idx), full);
}

Plane bundle_plane(const MapSpec& map, const TorusPoint& p, BundleTag which,
                   SplitDims dims, int n, const Mat* seed, PushDiagnostics* diag) {
  if (n < 1) throw PreconditionError("bundle plane: need N >= 1");
  OrbitContext ctx(map, p);
  Mat s = seed != nullptr ? *seed : default_seed(which, dims, map.dim());
  Direction dir = (which == BundleTag::U || which == BundleTag::CU)
                      ? Direction::Forward
                      : Direction::Backward;
  return iterated_plane(ctx, 0, n, dir, s, diag);
}

}  // namespace

Plane unstable_plane(const MapSpec& map, const TorusPoint& p, int u, int n,
                     const Mat* seed, PushDiagnostics* diag) {
  return bundle_plane(map, p, BundleTag::U, SplitDims{u, 0, map.dim() - u}, n, seed,
                      diag);
}

Plane stable_plane(const MapSpec& map, const TorusPoint& p, int s, int n,
                   const Mat* seed, PushDiagnostics* diag) {
  return bundle_plane(map, p, BundleTag::S, SplitDims{map.dim() - s, 0, s}, n, seed,
                      diag);
}

Plane cu_plane(const MapSpec& map, const TorusPoint& p, SplitDims dims, int n,
               const Mat* seed, PushDiagnostics* diag) {
  return bundle_plane(map, p, BundleTag::CU, dims, n, seed, diag);
}

Plane cs_plane(const MapSpec& map, const TorusPoint& p, SplitDims dims, int n,
               const Mat* seed, PushDiagnostics* diag) {
  return bundle_plane(map, p, BundleTag::CS, dims, n, seed, diag);
}

Mat intersect_spans(const Mat& a, const Mat& b, int expected_dim, double sv_tol) {
  if (a.rows() != b.rows())
    throw DimensionMismatchError("intersect_spans: ambient dimension mismatch");
  Eigen::JacobiSVD<Mat> svd(a.transpose() * b,
                            Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int hits = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) >= 1.0 - sv_tol) ++hits;
  if (hits != expected_dim)
    throw DegeneracyError(
        "intersect_spans: intersection dimension " + std::to_string(hits) +
            " != expected " + std::to_string(expected_dim) +
            " (singular values thresholded at 1e-6)",
        hits > 0 ? sv(std::min<int>(hits, sv.size() - 1)) : sv(0));
  // Average the paired principal vectors so the error of either input
  // enters symmetrically, then re-orthonormalize.
  Mat dirs(a.rows(), expected_dim);
  for (int i = 0; i < expected_dim; ++i)
    dirs.col(i) = 0.5 * (a * svd.matrixU().col(i) + b * svd.matrixV().col(i));
  return orthonormalize(dirs);
}

Plane center_plane(const MapSpec& map, const TorusPoint& p, SplitDims dims, int n) {
  if (dims.c < 1) throw PreconditionError("center_plane: requires c >= 1");
  Plane cu = cu_plane(map, p, dims, n);
  Plane cs = cs_plane(map, p, dims, n);
  return Plane(p, intersect_spans(cu.basis(), cs.basis(), dims.c));
}

const Plane& Splitting::plane(BundleTag which) const {
  switch (which) {
    case BundleTag::U:
      return eu;
    case BundleTag::S:
      return es;
    case BundleTag::C:
      if (!ec) throw PreconditionError("Splitting: no center plane (c = 0)");
      return *ec;
    case BundleTag::CU:
      return cu_or_eu();
    case BundleTag::CS:
      return cs_or_es();
  }
  throw PreconditionError("Splitting: bad bundle tag");
}

namespace {

Splitting splitting_at_index(const OrbitContext& ctx, int idx, SplitDims dims, int n) {
  const int d = ctx.dim();
  if (dims.dim() != d)
    throw DimensionMismatchError("compute_splitting: dims do not sum to d");
  if (dims.u < 1 || dims.s < 1)
    throw PreconditionError("compute_splitting: need u >= 1 and s >= 1");

  Plane eu = iterated_plane(ctx, idx, n, Direction::Forward,
                            default_seed(BundleTag::U, dims, d), nullptr);
  Plane es = iterated_plane(ctx, idx, n, Direction::Backward,
                            default_seed(BundleTag::S, dims, d), nullptr);
  std::optional<Plane> cu;
  std::optional<Plane> cs;
  std::optional<Plane> ec;
  if (dims.c > 0) {
    cu = iterated_plane(ctx, idx, n, Direction::Forward,
                        default_seed(BundleTag::CU, dims, d), nullptr);
    cs = iterated_plane(ctx, idx, n, Direction::Backward,
                        default_seed(BundleTag::CS, dims, d), nullptr);
    ec = Plane(ctx.point(idx), intersect_spans(cu->basis(), cs->basis(), dims.c));
  }

  Mat concat(d, d);
  concat.leftCols(dims.u) = eu.basis();
  if (ec) concat.middleCols(dims.u, dims.c) = ec->basis();
  concat.rightCols(dims.s) = es.basis();
  auto svd = concat.jacobiSvd();
  double smin = svd.singularValues()(d - 1);
  if (smin < 1e-12)
    throw DegeneracyError("compute_splitting: splitting numerically degenerate", smin);

  Splitting out{ctx.point(idx), dims,          std::move(eu), std::move(ec),
                std::move(es),  std::move(cu), std::move(cs),
                svd.singularValues()(0) / smin};
  return out;
}

}  // namespace

Splitting compute_splitting(const MapSpec& map, const TorusPoint& p, SplitDims dims,
                            int n) {
  OrbitContext ctx(map, p);
  return splitting_at_index(ctx, 0, dims, n);
}

double invariance_residual(const MapSpec& map, const TorusPoint& p, SplitDims dims,
                           int n, BundleTag which) {
  OrbitContext ctx(map, p);
  Splitting at_p = splitting_at_index(ctx, 0, dims, n);
  Splitting at_fp = splitting_at_index(ctx, 1, dims, n);
  const Plane& e = at_p.plane(which);
  Mat pushed = orthonormalize(ctx.jac(0) * e.basis());
  return subspace_distance(pushed, at_fp.plane(which).basis());
}

OrbitSplittings::OrbitSplittings(const MapSpec& map, const TorusPoint& p,
                                 SplitDims dims, int n_push)
    : ctx_(map, p), dims_(dims), n_push_(n_push) {}

const Splitting& OrbitSplittings::at(int idx) const {
  auto it = cache_.find(idx);
  if (it == cache_.end())
    it = cache_.emplace(idx, splitting_at_index(ctx_, idx, dims_, n_push_)).first;
  return it->second;
}

Chart build_chart(const Splitting& splitting,
                  const std::vector<std::vector<BundleTag>>& grouping,
                  double angle_tol) {
  std::vector<std::vector<Plane>> groups;
  for (const auto& tags : grouping) {
    std::vector<Plane> planes;
    for (BundleTag tag : tags) {
      if (tag == BundleTag::C && !splitting.ec) continue;  // trivial center
      planes.push_back(splitting.plane(tag));
    }
    if (planes.empty())
      throw PreconditionError("build_chart: grouping block has no nontrivial bundle");
    groups.push_back(std::move(planes));
  }
  return build_chart_from_groups(splitting.point, groups, angle_tol);
}

std::vector<std::vector<BundleTag>> grouping_u_cs(const SplitDims& dims) {
  if (dims.c > 0) return {{BundleTag::U}, {BundleTag::C, BundleTag::S}};
  return {{BundleTag::U}, {BundleTag::S}};
}

}  // namespace splitlab
