#ifndef SPLITLAB_CHART_HPP
#define SPLITLAB_CHART_HPP

#include <vector>

#include "splitlab/plane.hpp"
#include "splitlab/torus.hpp"

namespace splitlab {

// An adapted frame at a point: an ordered list of d x k_i blocks with
// orthonormal columns whose concatenation is an invertible d x d matrix.
// Block i spans one group of splitting planes.
class Frame {
 public:
  Frame(TorusPoint point, std::vector<Mat> blocks);

  const TorusPoint& point() const { return point_; }
  const std::vector<Mat>& blocks() const { return blocks_; }
  int dim() const { return point_.dim(); }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_dim(int i) const { return static_cast<int>(blocks_[i].cols()); }
  int block_offset(int i) const;

  // The concatenated d x d matrix.
  const Mat& matrix() const { return concat_; }
  const Mat& inverse() const { return inv_; }
  double condition_number() const { return cond_; }

 private:
  TorusPoint point_;
  std::vector<Mat> blocks_;
  Mat concat_;
  Mat inv_;
  double cond_;
};

// An affine chart of the flat torus: x |-> wrap(base + F x).  Its value at
// 0 is the base point and its differential everywhere is the frame matrix.
class Chart {
 public:
  Chart(TorusPoint base, Frame frame);

  const TorusPoint& base() const { return base_; }
  const Frame& frame() const { return frame_; }

  TorusPoint eval(const Vec& x) const;
  // Chart coordinates of a point near the base (inverse of eval, using the
  // minimal displacement representative).
  Vec coords_of(const TorusPoint& q) const;
  // Chart coordinates of a tangent vector.
  Vec tangent_coords(const Vec& v) const { return frame_.inverse() * v; }

 private:
  TorusPoint base_;
  Frame frame_;
};

// Build a frame from ordered groups of planes at the same point.  Each
// group is concatenated and re-orthonormalized within the block.  Blocks
// whose mutual angle falls below angle_tol (radians) are rejected.
Frame build_frame(const TorusPoint& p, const std::vector<std::vector<Plane>>& groups,
                  double angle_tol = 1e-8);

inline Chart build_chart_from_groups(const TorusPoint& p,
                                     const std::vector<std::vector<Plane>>& groups,
                                     double angle_tol = 1e-8) {
  return Chart(p, build_frame(p, groups, angle_tol));
}

}  // namespace splitlab

#endif  // SPLITLAB_CHART_HPP
