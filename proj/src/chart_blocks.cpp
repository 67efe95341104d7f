#include "splitlab/chart_blocks.hpp"

#include <Eigen/LU>
#include <cmath>

#include "splitlab/errors.hpp"

namespace splitlab {

Mat ChartBlocks::c_contract(const Vec& chart_dir) const {
  if (chart_dir.size() != static_cast<int>(c_by_dir.size()))
    throw DimensionMismatchError("ChartBlocks: direction has wrong dimension");
  Mat out = Mat::Zero(cs_dim(), u_dim());
  for (std::size_t k = 0; k < c_by_dir.size(); ++k)
    out += chart_dir[static_cast<int>(k)] * c_by_dir[k];
  return out;
}

ChartBlocks chart_blocks(const MapSpec& map, const Splitting& at_p,
                         const Splitting& at_fp, double offdiag_tol) {
  const int d = map.dim();
  const int u = at_p.dims.u;
  const int cs = d - u;
  if (displacement(map.eval(at_p.point), at_fp.point).norm() > 1e-10)
    throw PreconditionError("chart_blocks: second splitting is not at f(p)");

  Chart chart_p = build_chart(at_p, grouping_u_cs(at_p.dims));
  Chart chart_fp = build_chart(at_fp, grouping_u_cs(at_fp.dims));
  const Mat& f_p = chart_p.frame().matrix();
  const Mat& f_fp_inv = chart_fp.frame().inverse();

  Mat a = f_fp_inv * map.jacobian(at_p.point) * f_p;
  double leak = 0.0;
  leak = std::max(leak, a.topRightCorner(u, cs).cwiseAbs().maxCoeff());
  leak = std::max(leak, a.bottomLeftCorner(cs, u).cwiseAbs().maxCoeff());
  if (leak > offdiag_tol)
    throw MisalignedSplittingError(
        "chart_blocks: off-diagonal chart derivative leakage; splitting not converged",
        leak);

  Mat auu = a.topLeftCorner(u, u);
  Mat acscs = a.bottomRightCorner(cs, cs);
  Mat auu_inv = auu.partialPivLu().inverse();

  // Curvature per chart direction:
  //   C_k = (d_k D^{u,cs}) (D^{u,u})^{-1}
  //       - D^{u,cs} (D^{u,u})^{-1} (d_k D^{u,u}) (D^{u,u})^{-1},
  // where d_k differentiates the chart expression of Df in direction e_k.
  // The second term carries the (vanishing at 0) off-diagonal block; it is
  // computed and its size recorded rather than assumed away.
  std::vector<Mat> hess = map.hessian(at_p.point);
  std::vector<Mat> c_by_dir(static_cast<std::size_t>(d));
  Mat bottom_left = a.bottomLeftCorner(cs, u);
  double dropped = 0.0;
  for (int k = 0; k < d; ++k) {
    Vec w = f_p.col(k);
    Mat dj(d, d);
    for (int i = 0; i < d; ++i) dj.row(i) = (hess[static_cast<std::size_t>(i)] * w).transpose();
    Mat dm = f_fp_inv * dj * f_p;
    Mat term1 = dm.bottomLeftCorner(cs, u) * auu_inv;
    Mat term2 = bottom_left * auu_inv * dm.topLeftCorner(u, u) * auu_inv;
    dropped = std::max(dropped, term2.norm());
    c_by_dir[static_cast<std::size_t>(k)] = term1 - term2;
  }
  if (dropped > 1e-6)
    throw MisalignedSplittingError(
        "chart_blocks: curvature formula second term not negligible at 0", dropped);

  return ChartBlocks{at_p.point, at_fp.point, std::move(chart_p), std::move(chart_fp),
                     std::move(a),  std::move(auu), std::move(acscs),
                     std::move(c_by_dir), leak, dropped};
}

}  // namespace splitlab
