#ifndef SPLITLAB_PLANE_HPP
#define SPLITLAB_PLANE_HPP

#include <Eigen/Core>

#include "splitlab/torus.hpp"

namespace splitlab {

// Orthonormalize the columns of m by a Householder QR with the diagonal of R
// forced positive, so the basis of a given span is reproducible.  Throws
// DegeneracyError when a diagonal entry of R falls below rank_tol.
Mat orthonormalize(const Mat& m, double rank_tol = 1e-14);

// Gap between two subspaces given by orthonormal bases of equal rank:
// the operator norm of the difference of orthogonal projectors, which is
// the sine of the largest principal angle.  Stable for tiny angles.
double subspace_distance(const Mat& a, const Mat& b);

// A k-dimensional subspace of R^d attached to a torus point, stored as an
// orthonormal basis (d x k, columns).
class Plane {
 public:
  Plane(TorusPoint point, Mat basis);

  const TorusPoint& point() const { return point_; }
  const Mat& basis() const { return basis_; }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int k() const { return static_cast<int>(basis_.cols()); }

  // Orthogonal projection of v onto the plane.
  Vec project(const Vec& v) const { return basis_ * (basis_.transpose() * v); }

 private:
  TorusPoint point_;
  Mat basis_;
};

// sin of the largest principal angle between the spans.  Symmetric, zero
// iff equal span, and a metric on planes of fixed (d, k).
double plane_distance(const Plane& p, const Plane& q);

}  // namespace splitlab

#endif  // SPLITLAB_PLANE_HPP
