#include "splitlab/graph_coords.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include "splitlab/errors.hpp"

namespace splitlab {

double GraphCoords::norm() const {
  if (p.size() == 0) return 0.0;
  return p.jacobiSvd().singularValues()(0);
}

GraphCoords graph_coords_of(const Plane& target, const Chart& reference,
                            std::string base_id, std::string complement_id) {
  const Frame& frame = reference.frame();
  if (frame.n_blocks() != 2)
    throw PreconditionError("graph_coords_of: reference chart must have two blocks");
  const int base_dim = frame.block_dim(0);
  if (target.k() != base_dim)
    throw DimensionMismatchError("graph_coords_of: plane dim != base block dim");

  Mat y = frame.inverse() * target.basis();
  Mat y_base = y.topRows(base_dim);
  Eigen::PartialPivLU<Mat> lu(y_base);
  double rcond = y_base.jacobiSvd().singularValues().minCoeff();
  if (rcond < 1e-10)
    throw DegeneracyError("graph_coords_of: plane nearly vertical over the base block",
                          rcond);
  Mat p = y.bottomRows(y.rows() - base_dim) * lu.inverse();
  return GraphCoords{std::move(base_id), std::move(complement_id), std::move(p)};
}

Plane plane_from_graph(const Chart& reference, const Mat& p) {
  const Frame& frame = reference.frame();
  if (frame.n_blocks() != 2)
    throw PreconditionError("plane_from_graph: reference chart must have two blocks");
  Mat basis = frame.blocks()[0] + frame.blocks()[1] * p;
  return Plane(reference.base(), orthonormalize(basis));
}

}  // namespace splitlab
