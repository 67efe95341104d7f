// Test-only oracles, kept independent of the implementation paths they
// check: eigen-decomposition for linear maps, finite differences, and a
// deterministic point sampler.
#ifndef SPLITLAB_TESTS_ORACLES_HPP
#define SPLITLAB_TESTS_ORACLES_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <vector>

#include "splitlab/map_spec.hpp"
#include "splitlab/torus.hpp"
#include "splitlab/util.hpp"

namespace splitlab::testing {

// Real eigenvectors of a matrix sorted by descending |eigenvalue|, as unit
// columns with positive leading component.
inline Mat eigenvector_columns(const Mat& a) {
  Eigen::EigenSolver<Mat> es(a);
  std::vector<std::pair<double, Vec>> pairs;
  for (int i = 0; i < a.rows(); ++i) {
    Vec v = es.eigenvectors().col(i).real();
    double im = es.eigenvectors().col(i).imag().norm();
    if (im > 1e-12) continue;  // only real eigenvectors are used by the tests
    v.normalize();
    // Deterministic sign: first nonzero component positive.
    for (int j = 0; j < v.size(); ++j) {
      if (std::abs(v[j]) > 1e-14) {
        if (v[j] < 0) v = -v;
        break;
      }
    }
    pairs.emplace_back(std::abs(es.eigenvalues()(i)), v);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  Mat out(a.rows(), static_cast<int>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out.col(static_cast<int>(i)) = pairs[i].second;
  return out;
}

// Central finite-difference jacobian of the map through displacement, so
// the wrap seam is invisible.
inline Mat fd_jacobian(const MapSpec& map, const TorusPoint& p, double h) {
  const int d = map.dim();
  Mat j(d, d);
  for (int k = 0; k < d; ++k) {
    Vec e = Vec::Zero(d);
    e[k] = h;
    TorusPoint plus = translate(p, e);
    TorusPoint minus = translate(p, -e);
    j.col(k) = displacement(map.eval(minus), map.eval(plus)) / (2.0 * h);
  }
  return j;
}

// Central finite difference of the analytic jacobian; checks the Hessian.
inline std::vector<Mat> fd_hessian(const MapSpec& map, const TorusPoint& p, double h) {
  const int d = map.dim();
  std::vector<Mat> hess(d, Mat::Zero(d, d));
  for (int k = 0; k < d; ++k) {
    Vec e = Vec::Zero(d);
    e[k] = h;
    Mat dj = (map.jacobian(translate(p, e)) - map.jacobian(translate(p, -e))) / (2.0 * h);
    for (int i = 0; i < d; ++i) hess[i].col(k) = dj.row(i).transpose();
  }
  return hess;
}

inline TorusPoint random_point(Rng& rng, int d) {
  Vec x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform01();
  return TorusPoint(x);
}

inline Vec random_vector(Rng& rng, int d) {
  Vec x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1.0, 1.0);
  return x;
}

}  // namespace splitlab::testing

#endif  // SPLITLAB_TESTS_ORACLES_HPP
