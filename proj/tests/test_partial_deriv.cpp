#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <iostream>

#include "oracles.hpp"
#include "splitlab/center_curve.hpp"
#include "splitlab/chart_blocks.hpp"
#include "splitlab/deriv_series.hpp"
#include "splitlab/errors.hpp"
#include "splitlab/graph_coords.hpp"
#include "splitlab/map_zoo.hpp"

using namespace splitlab;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

MapSpec cat_times_shear() {
  Eigen::MatrixXi a(4, 4);
  a << 2, 1, 0, 0,
       1, 1, 0, 0,
       0, 0, 1, 1,
       0, 0, 0, 1;
  return make_linear_toral(a);
}

double tensor_norm(const std::vector<Mat>& t) {
  double s = 0.0;
  for (const Mat& m : t) s += m.squaredNorm();
  return std::sqrt(s);
}

// Chart expression of the (cs,u) graph block at chart coordinates x; the
// independent oracle for the curvature tensor.
Mat graph_block_at(const MapSpec& map, const ChartBlocks& cb, const Vec& x) {
  const int u = cb.u_dim();
  const int cs = cb.cs_dim();
  TorusPoint q = cb.chart_p.eval(x);
  Mat m = cb.chart_fp.frame().inverse() * map.jacobian(q) * cb.chart_p.frame().matrix();
  return Mat(m.bottomLeftCorner(cs, u) * m.topLeftCorner(u, u).partialPivLu().inverse());
}

}  // namespace

TEST_CASE("curvature tensor vanishes for linear and affine maps") {
  {
    MapSpec cat = make_linear_toral();
    Splitting s0 = compute_splitting(cat, wrap(vec3(0.3, 0.6, 0).head(2)), {1, 0, 1}, 40);
    Splitting s1 = compute_splitting(cat, cat.eval(s0.point), {1, 0, 1}, 40);
    ChartBlocks cb = chart_blocks(cat, s0, s1);
    CHECK(tensor_norm(cb.c_by_dir) == 0.0);
  }
  {
    MapSpec skew = make_skew_product();
    TorusPoint p = wrap(vec3(0.1, 0.7, 0.4));
    Splitting s0 = compute_splitting(skew, p, {1, 1, 1}, 40);
    Splitting s1 = compute_splitting(skew, skew.eval(p), {1, 1, 1}, 40);
    ChartBlocks cb = chart_blocks(skew, s0, s1);
    CHECK(tensor_norm(cb.c_by_dir) == 0.0);
    CHECK(cb.offdiag_leakage <= 1e-10);
  }
}

TEST_CASE("chart derivative is block diagonal on converged splittings") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.1, 0.2, 0.3));
  Splitting s0 = compute_splitting(map, p, {1, 1, 1}, 60);
  Splitting s1 = compute_splitting(map, map.eval(p), {1, 1, 1}, 60);
  ChartBlocks cb = chart_blocks(map, s0, s1);
  CHECK(cb.offdiag_leakage <= 1e-10);
  CHECK(cb.dropped_term_norm <= 1e-9);
}

TEST_CASE("curvature tensor matches the FD-on-blocks oracle") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.1, 0.2, 0.3));
  Splitting s0 = compute_splitting(map, p, {1, 1, 1}, 60);
  Splitting s1 = compute_splitting(map, map.eval(p), {1, 1, 1}, 60);
  ChartBlocks cb = chart_blocks(map, s0, s1);

  const double h = 1e-5;
  double worst = 0.0;
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) {
    Vec e = Vec::Zero(3);
    e[k] = h;
    Mat fd = (graph_block_at(map, cb, e) - graph_block_at(map, cb, -e)) / (2.0 * h);
    worst = std::max(worst, (fd - cb.c_by_dir[static_cast<std::size_t>(k)]).norm());
    scale = std::max(scale, cb.c_by_dir[static_cast<std::size_t>(k)].norm());
  }
  CHECK(scale > 0.0);
  CHECK(worst / scale <= 1e-6);
}

TEST_CASE("Auu is conjugate to the unstable restriction") {
  MapSpec map = make_perturbed_skew(0.05);
  TorusPoint p = wrap(vec3(0.8, 0.25, 0.6));
  Splitting s0 = compute_splitting(map, p, {1, 1, 1}, 60);
  Splitting s1 = compute_splitting(map, map.eval(p), {1, 1, 1}, 60);
  ChartBlocks cb = chart_blocks(map, s0, s1);

  auto sv_auu = cb.auu.jacobiSvd().singularValues();
  auto sv_tu = Mat(map.jacobian(p) * s0.eu.basis()).jacobiSvd().singularValues();
  for (int i = 0; i < sv_auu.size(); ++i)
    CHECK(std::abs(sv_auu(i) - sv_tu(i)) <= 1e-8);
}

TEST_CASE("K-action equals the linearized graph transform") {
  MapSpec map = make_perturbed_skew(0.03);
  TorusPoint p = wrap(vec3(0.45, 0.15, 0.7));
  Splitting s0 = compute_splitting(map, p, {1, 1, 1}, 60);
  Splitting s1 = compute_splitting(map, map.eval(p), {1, 1, 1}, 60);
  ChartBlocks cb = chart_blocks(map, s0, s1);

  // Exact one-step graph transform of a graph plane over E^u_p, expressed
  // over the splitting at f(p):
  //   P' = (A_bl + A_br P)(A_tl + A_tr P)^{-1}.
  // Its derivative in P at 0 must be P -> Acscs P Auu^{-1}.
  Mat p0(2, 1);
  p0 << 0.3, -0.2;
  Mat auu_inv = cb.auu.partialPivLu().inverse();
  auto transform = [&](const Mat& x) {
    Mat num = cb.a.bottomLeftCorner(2, 1) + cb.a.bottomRightCorner(2, 2) * x;
    Mat den = cb.a.topLeftCorner(1, 1) + cb.a.topRightCorner(1, 2) * x;
    return Mat(num * den.partialPivLu().inverse());
  };
  double eps = 1e-6;
  Mat lin_fd = (transform(eps * p0) - transform(-eps * p0)) / (2.0 * eps);
  Mat lin_k = cb.acscs * p0 * auu_inv;
  CHECK((lin_fd - lin_k).norm() <= 1e-6 * std::max(1.0, lin_k.norm()));
}

TEST_CASE("series vanishes on zero-curvature maps") {
  // Criterion: identically zero to 1e-14 whenever C == 0.
  {
    MapSpec skew = make_skew_product();
    SeriesResult r = dEu_dEc_series(skew, wrap(vec3(0.2, 0.9, 0.35)), vec3(0, 0, 1), 30,
                                    {1, 1, 1}, 40);
    CHECK(r.value.norm() <= 1e-14);
    CHECK(r.projection_defect <= 1e-12);
  }
  {
    MapSpec eps0 = make_perturbed_skew(0.0);
    SeriesResult r = dEu_dEc_series(eps0, wrap(vec3(0.6, 0.1, 0.8)), vec3(1, 1, 1), 30,
                                    {1, 1, 1}, 40);
    CHECK(r.value.norm() <= 1e-14);
  }
  {
    // Trivial center: any v projects to zero and the series is zero.
    MapSpec cat = make_linear_toral();
    Vec v(2);
    v << 0.3, 0.4;
    SeriesResult r = dEu_dEc_series(cat, wrap(vec3(0.7, 0.2, 0).head(2)), v, 30,
                                    {1, 0, 1}, 40);
    CHECK(r.value.norm() == 0.0);
    CHECK(r.projection_defect == doctest::Approx(v.norm()));
  }
}

TEST_CASE("series is exactly zero for v = 0") {
  MapSpec map = make_perturbed_skew(0.02);
  SeriesResult r = dEu_dEc_series(map, wrap(vec3(0.1, 0.2, 0.3)), Vec::Zero(3), 20,
                                  {1, 1, 1}, 60);
  CHECK(r.value.norm() == 0.0);
}

TEST_CASE("series is linear in v") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.1, 0.2, 0.3));
  OrbitSplittings os(map, p, {1, 1, 1}, 60);
  Vec ec = os.at(0).ec->basis().col(0);
  Vec w = vec3(0.2, -0.1, 0.5);

  SeriesResult rv = dEu_dEc_series(os, ec, 40);
  SeriesResult rw = dEu_dEc_series(os, w, 40);
  SeriesResult rsum = dEu_dEc_series(os, 2.0 * ec - 3.0 * w, 40);
  CHECK((rsum.value - (2.0 * rv.value - 3.0 * rw.value)).norm() <= 1e-10);
}

TEST_CASE("series terms decay geometrically within the bunching envelope") {
  MapSpec map = make_perturbed_skew(0.05);
  TorusPoint p = wrap(vec3(0.31, 0.77, 0.13));
  OrbitSplittings os(map, p, {1, 1, 1}, 60);
  Vec v = os.at(0).ec->basis().col(0);
  const int n_terms = 40;
  SeriesResult r = dEu_dEc_series(os, v, n_terms);

  REQUIRE(static_cast<int>(r.term_norms.size()) == n_terms);
  CHECK(r.decay_ratio < 1.0);
  CHECK(r.decay_ratio > 0.0);
  // Least-squares fit of log ||term_n|| against n over [10, N): the decay
  // rate must be strictly geometric and every term must sit under the
  // fitted envelope C rho^n up to a bounded fluctuation factor.
  double sn = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = 10; n < n_terms; ++n) {
    double tn = r.term_norms[static_cast<std::size_t>(n)];
    if (tn <= 0.0) continue;
    sn += 1.0;
    sx += n;
    sy += std::log(tn);
    sxx += static_cast<double>(n) * n;
    sxy += n * std::log(tn);
  }
  REQUIRE(sn >= 10);
  double slope = (sn * sxy - sx * sy) / (sn * sxx - sx * sx);
  double intercept = (sy - slope * sx) / sn;
  double rho = std::exp(slope);
  CHECK(rho < 1.0);
  for (int n = 10; n < n_terms; ++n) {
    double bound = 50.0 * std::exp(intercept + slope * n);
    CHECK(r.term_norms[static_cast<std::size_t>(n)] <= bound);
  }
  CHECK(r.tail_estimate >= 0.0);
  CHECK(r.tail_estimate < 1e-8);
}

TEST_CASE("series precondition rejects maps with bunching ratio >= 1") {
  MapSpec map = cat_times_shear();
  REQUIRE(map.default_dims()->c == 2);
  Vec v = Vec::Zero(4);
  v[2] = 1.0;
  CHECK_THROWS_AS(
      dEu_dEc_series(map, wrap(Vec::Constant(4, 0.3)), v, 20, {1, 2, 1}, 40),
      PreconditionError);
}

TEST_CASE("center curve of the exact skew is a straight theta line") {
  MapSpec skew = make_skew_product();
  TorusPoint p = wrap(vec3(0.25, 0.5, 0.1));
  BundleCurve curve = center_curve(skew, p, vec3(0, 0, 1), 1e-3, 100, {1, 1, 1}, 40);
  REQUIRE(curve.size() == 101);
  for (const TorusPoint& q : curve.points) {
    CHECK(std::abs(q[0] - p[0]) <= 1e-12);
    CHECK(std::abs(q[1] - p[1]) <= 1e-12);
  }
  // Unit speed along theta.
  CHECK(std::abs(curve.points.back()[2] - p[2] - 0.1) <= 1e-9);
}

TEST_CASE("zero-step curve is the single starting point") {
  MapSpec skew = make_skew_product();
  TorusPoint p = wrap(vec3(0.3, 0.3, 0.3));
  BundleCurve curve = center_curve(skew, p, vec3(0, 0, 1), 1e-3, 0, {1, 1, 1}, 30);
  CHECK(curve.size() == 1);
  CHECK(displacement(curve.points[0], p).norm() == 0.0);
}

TEST_CASE("center curve chords stay tangent to the bundle") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.42, 0.18, 0.66));
  const double step = 1e-3;
  BundleCurve curve = center_curve(map, p, vec3(0, 0, 1), step, 50, {1, 1, 1}, 60);
  for (int k = 0; k + 1 < curve.size(); ++k) {
    Vec chord = displacement(curve.points[static_cast<std::size_t>(k)],
                             curve.points[static_cast<std::size_t>(k + 1)]);
    Plane ec = center_plane(map, curve.points[static_cast<std::size_t>(k + 1)],
                            {1, 1, 1}, 60);
    double defect = (chord - ec.project(chord)).norm();
    CHECK(defect <= 1e-4);
  }
}

TEST_CASE("curve step precondition") {
  MapSpec skew = make_skew_product();
  CHECK_THROWS_AS(
      center_curve(skew, wrap(vec3(0, 0, 0)), vec3(0, 0, 1), 0.5, 5, {1, 1, 1}, 30),
      PreconditionError);
}

TEST_CASE("fd derivative along a constant-bundle curve is zero") {
  MapSpec skew = make_skew_product();
  TorusPoint p = wrap(vec3(0.2, 0.8, 0.45));
  BundleCurve curve =
      symmetric_bundle_curve(skew, p, vec3(0, 0, 1), 1e-3, 5, BundleTag::C, {1, 1, 1}, 40);
  Mat fd = fd_derivative_along_curve(skew, curve, 1e-3, {1, 1, 1}, 40);
  CHECK(fd.norm() <= 1e-12);
}

TEST_CASE("series agrees with the FD oracle along a center curve") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.1, 0.2, 0.3));
  OrbitSplittings os(map, p, {1, 1, 1}, 60);
  Vec v = os.at(0).ec->basis().col(0);

  SeriesResult series = dEu_dEc_series(os, v, 60);
  const double h = 1e-3;
  BundleCurve curve =
      symmetric_bundle_curve(map, p, v, h, 1, BundleTag::C, {1, 1, 1}, 60);
  Mat fd = fd_derivative_along_curve(map, curve, h, {1, 1, 1}, 60);

  double rel = (series.value - fd).norm() / std::max(fd.norm(), 1e-6);
  CHECK(rel <= 5e-2);
}

TEST_CASE("fd derivative consistency when h is halved") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.55, 0.35, 0.85));
  const double step = 1e-3;
  BundleCurve curve =
      symmetric_bundle_curve(map, p, vec3(0, 0, 1), step, 8, BundleTag::C, {1, 1, 1}, 60);
  Mat f8 = fd_derivative_along_curve(map, curve, 8 * step, {1, 1, 1}, 60);
  Mat f4 = fd_derivative_along_curve(map, curve, 4 * step, {1, 1, 1}, 60);
  Mat f2 = fd_derivative_along_curve(map, curve, 2 * step, {1, 1, 1}, 60);
  double d1 = (f8 - f4).norm();
  double d2 = (f4 - f2).norm();
  INFO("halving deltas: ", d1, " -> ", d2, " ratio ", d2 / d1);
  CHECK(d2 / d1 >= 0.1);
  CHECK(d2 / d1 <= 0.7);
}

TEST_CASE("reversed curve gives the sign-flipped derivative") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.15, 0.65, 0.25));
  BundleCurve curve =
      symmetric_bundle_curve(map, p, vec3(0, 0, 1), 1e-3, 2, BundleTag::C, {1, 1, 1}, 60);
  Mat fwd = fd_derivative_along_curve(map, curve, 2e-3, {1, 1, 1}, 60);
  Mat rev = fd_derivative_along_curve(map, curve.reversed(), 2e-3, {1, 1, 1}, 60);
  CHECK((fwd + rev).norm() <= 1e-10 * std::max(1.0, fwd.norm()));
}

TEST_CASE("fd derivative rejects h off the lattice or beyond the curve") {
  MapSpec map = make_perturbed_skew(0.02);
  TorusPoint p = wrap(vec3(0.5, 0.5, 0.5));
  BundleCurve curve =
      symmetric_bundle_curve(map, p, vec3(0, 0, 1), 1e-3, 2, BundleTag::C, {1, 1, 1}, 50);
  CHECK_THROWS_AS(fd_derivative_along_curve(map, curve, 1.5e-3, {1, 1, 1}, 50),
                  PreconditionError);
  CHECK_THROWS_AS(fd_derivative_along_curve(map, curve, 5e-3, {1, 1, 1}, 50),
                  PreconditionError);
}

TEST_CASE("regularity: flat sentinel on the constant bundle") {
  MapSpec skew = make_skew_product();
  RegularityReport r = regularity_estimate(skew, wrap(vec3(0.3, 0.4, 0.5)),
                                           CurveDirection::Center,
                                           {1.0 / 16, 1.0 / 64, 1.0 / 256}, {1, 1, 1}, 40);
  CHECK(r.flat);
  CHECK(std::isnan(r.slope));
}

TEST_CASE("regularity: C1 slope along the center on the perturbed skew") {
  MapSpec map = make_perturbed_skew(0.02);
  std::vector<double> scales;
  for (int k = 4; k <= 10; ++k) scales.push_back(std::pow(2.0, -k));
  RegularityReport r = regularity_estimate(map, wrap(vec3(0.1, 0.2, 0.3)),
                                           CurveDirection::Center, scales, {1, 1, 1}, 60);
  INFO("center slope ", r.slope);
  CHECK(!r.flat);
  CHECK(r.slope >= 0.95);
}

TEST_CASE("regularity: stable-direction slope is reported, not asserted") {
  MapSpec map = make_perturbed_skew(0.05);
  std::vector<double> scales;
  for (int k = 4; k <= 10; ++k) scales.push_back(std::pow(2.0, -k));
  RegularityReport r = regularity_estimate(map, wrap(vec3(0.1, 0.2, 0.3)),
                                           CurveDirection::Stable, scales, {1, 1, 1}, 60);
  // Demonstration of the Holder phenomenon; the value is recorded only.
  std::cout << "[info] stable-direction fitted slope = " << r.slope
            << " (fit residual " << r.fit_residual << ")\n";
  CHECK(std::isfinite(r.slope));
}

TEST_CASE("regularity rejects fewer than 3 scales") {
  MapSpec map = make_perturbed_skew(0.02);
  CHECK_THROWS_AS(regularity_estimate(map, wrap(vec3(0.1, 0.2, 0.3)),
                                      CurveDirection::Center, {0.1, 0.01}, {1, 1, 1}, 40),
                  PreconditionError);
}
