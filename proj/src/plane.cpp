#include "splitlab/plane.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "splitlab/errors.hpp"

namespace splitlab {

Mat orthonormalize(const Mat& m, double rank_tol) {
  const int k = static_cast<int>(m.cols());
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    double d = r(j, j);
    if (std::abs(d) < rank_tol)
      throw DegeneracyError("orthonormalize: rank collapse, |R_jj| below tolerance",
                            std::abs(d));
    if (d < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

double subspace_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatchError("subspace_distance: shape mismatch");
  // || (I - bb^T) a ||_2 = sin(theta_max); computed both ways and maxed so
  // the result is an exact function of the unordered pair.
  Mat ra = a - b * (b.transpose() * a);
  Mat rb = b - a * (a.transpose() * b);
  double sa = ra.jacobiSvd().singularValues()(0);
  double sb = rb.jacobiSvd().singularValues()(0);
  double s = std::max(sa, sb);
  return s > 1.0 ? 1.0 : s;
}

Plane::Plane(TorusPoint point, Mat basis)
    : point_(std::move(point)), basis_(std::move(basis)) {
  const int d = static_cast<int>(basis_.rows());
  const int k = static_cast<int>(basis_.cols());
  if (d != point_.dim()) throw DimensionMismatchError("Plane: basis rows != point dim");
  if (k < 1 || k >= d) throw PreconditionError("Plane: need 1 <= k < d");
  double orth = (basis_.transpose() * basis_ - Mat::Identity(k, k))
                    .cwiseAbs()
                    .maxCoeff();
  if (orth > 1e-12)
    throw PreconditionError("Plane: basis not orthonormal to 1e-12");
}

double plane_distance(const Plane& p, const Plane& q) {
  if (p.ambient_dim() != q.ambient_dim())
    throw DimensionMismatchError("plane_distance: ambient dimension mismatch");
  if (p.k() != q.k())
    throw DimensionMismatchError("plane_distance: plane dimension mismatch");
  return subspace_distance(p.basis(), q.basis());
}

}  // namespace splitlab
