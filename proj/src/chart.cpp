#include "splitlab/chart.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include "splitlab/errors.hpp"

namespace splitlab {

Frame::Frame(TorusPoint point, std::vector<Mat> blocks)
    : point_(std::move(point)), blocks_(std::move(blocks)) {
  const int d = point_.dim();
  int total = 0;
  for (const Mat& b : blocks_) {
    if (b.rows() != d) throw DimensionMismatchError("Frame: block rows != d");
    double orth = (b.transpose() * b - Mat::Identity(b.cols(), b.cols()))
                      .cwiseAbs()
                      .maxCoeff();
    if (orth > 1e-12) throw PreconditionError("Frame: block not orthonormal to 1e-12");
    total += static_cast<int>(b.cols());
  }
  if (total != d) throw DimensionMismatchError("Frame: blocks do not sum to d");

  concat_.resize(d, d);
  int off = 0;
  for (const Mat& b : blocks_) {
    concat_.middleCols(off, b.cols()) = b;
    off += static_cast<int>(b.cols());
  }
  auto svd = concat_.jacobiSvd();
  double smin = svd.singularValues()(d - 1);
  double smax = svd.singularValues()(0);
  if (smin < 1e-14)
    throw DegeneracyError("Frame: concatenated matrix numerically singular", smin);
  cond_ = smax / smin;
  inv_ = concat_.partialPivLu().inverse();
}

int Frame::block_offset(int i) const {
  int off = 0;
  for (int j = 0; j < i; ++j) off += block_dim(j);
  return off;
}

Chart::Chart(TorusPoint base, Frame frame)
    : base_(std::move(base)), frame_(std::move(frame)) {
  if (base_.dim() != frame_.dim())
    throw DimensionMismatchError("Chart: base/frame dimension mismatch");
}

TorusPoint Chart::eval(const Vec& x) const {
  return translate(base_, frame_.matrix() * x);
}

Vec Chart::coords_of(const TorusPoint& q) const {
  return frame_.inverse() * displacement(base_, q);
}

Frame build_frame(const TorusPoint& p, const std::vector<std::vector<Plane>>& groups,
                  double angle_tol) {
  const int d = p.dim();
  std::vector<Mat> blocks;
  blocks.reserve(groups.size());
  for (const auto& group : groups) {
    if (group.empty()) throw PreconditionError("build_frame: empty group");
    int cols = 0;
    for (const Plane& pl : group) cols += pl.k();
    Mat raw(d, cols);
    int off = 0;
    for (const Plane& pl : group) {
      raw.middleCols(off, pl.k()) = pl.basis();
      off += pl.k();
    }
    blocks.push_back(orthonormalize(raw));
  }
  // Any two blocks must meet at an angle above tolerance.  The smallest
  // principal angle is computed through its sine, which stays accurate
  // for nearly parallel blocks.
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      Mat resid = blocks[j] - blocks[i] * (blocks[i].transpose() * blocks[j]);
      auto sv = resid.jacobiSvd().singularValues();
      double s = std::min(1.0, sv(sv.size() - 1));
      double angle = std::asin(s);
      if (angle < angle_tol)
        throw DegeneracyError("build_frame: blocks nearly parallel, angle below tolerance",
                              angle);
    }
  }
  return Frame(p, std::move(blocks));
}

}  // namespace splitlab
