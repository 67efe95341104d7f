#include "splitlab/map_zoo.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "splitlab/errors.hpp"

namespace splitlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest allowed sup of ||Df - L||_inf over a 32^3 sample grid; keeps the
// Newton seed (the linear part's inverse) inside its convergence basin.
constexpr double kMaxDerivativeDeviation = 0.35;

std::vector<Mat> zero_hessian(int d) { return std::vector<Mat>(d, Mat::Zero(d, d)); }

SplitDims dims_from_eigenvalues(const Mat& a) {
  Eigen::EigenSolver<Mat> es(a);
  SplitDims dims;
  for (int i = 0; i < a.rows(); ++i) {
    double m = std::abs(es.eigenvalues()(i));
    if (m > 1.0 + 1e-9)
      ++dims.u;
    else if (m < 1.0 - 1e-9)
      ++dims.s;
    else
      ++dims.c;
  }
  return dims;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw PreconditionError("map_zoo: cannot parse value of '" + key + "': " + s);
  }
}

// "2,1;1,1" -> integer matrix, rows separated by ';'.
Eigen::MatrixXi parse_int_matrix(const std::string& s) {
  std::vector<std::vector<int>> rows;
  std::stringstream row_stream(s);
  std::string row;
  while (std::getline(row_stream, row, ';')) {
    std::vector<int> vals;
    std::stringstream cell_stream(row);
    std::string cell;
    while (std::getline(cell_stream, cell, ',')) vals.push_back(std::stoi(cell));
    rows.push_back(vals);
  }
  if (rows.empty()) throw PreconditionError("map_zoo: empty matrix literal");
  Eigen::MatrixXi m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw PreconditionError("map_zoo: ragged matrix literal");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return m;
}

void reject_unknown_keys(const std::map<std::string, std::string>& params,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (!known.count(key))
      throw PreconditionError("map_zoo: unknown parameter '" + key + "'");
  }
}

}  // namespace

MapSpec make_linear_toral(const Eigen::MatrixXi& a) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d) throw PreconditionError("linear_toral: matrix must be square");
  Mat ad = a.cast<double>();
  double det = ad.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    throw PreconditionError("linear_toral: matrix must be unimodular (|det| = 1)");
  Mat ainv = ad.partialPivLu().inverse();
  // Round the inverse back to its exact integer entries.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) ainv(i, j) = std::round(ainv(i, j));

  MapSpec map(
      "linear_toral", d, [ad](const TorusPoint& p) { return wrap(ad * p.coords()); },
      [ad](const TorusPoint&) { return ad; },
      [d](const TorusPoint&) { return zero_hessian(d); });
  map.with_inverse_hint([ainv](const TorusPoint& q) { return wrap(ainv * q.coords()); })
      .with_linear_part(ad, Vec::Zero(d))
      .with_constant_jacobian(true)
      .with_default_dims(dims_from_eigenvalues(ad));
  return map;
}

MapSpec make_linear_toral() {
  Eigen::MatrixXi cat(2, 2);
  cat << 2, 1, 1, 1;
  return make_linear_toral(cat);
}

MapSpec make_skew_product(double alpha) {
  Mat lin(3, 3);
  lin << 2, 1, 0, 1, 1, 0, 0, 0, 1;
  Vec shift(3);
  shift << 0, 0, alpha;

  MapSpec map(
      "skew_product", 3,
      [lin, shift](const TorusPoint& p) { return wrap(lin * p.coords() + shift); },
      [lin](const TorusPoint&) { return lin; },
      [](const TorusPoint&) { return zero_hessian(3); });
  Mat lin_inv(3, 3);
  lin_inv << 1, -1, 0, -1, 2, 0, 0, 0, 1;
  map.with_inverse_hint([lin_inv, shift](const TorusPoint& q) {
        return wrap(lin_inv * (q.coords() - shift));
      })
      .with_linear_part(lin, shift)
      .with_constant_jacobian(true)
      .with_default_dims({1, 1, 1});
  return map;
}

MapSpec make_perturbed_skew(double eps, double alpha) {
  Mat lin(3, 3);
  lin << 2, 1, 0, 1, 1, 0, 0, 0, 1;
  Vec shift(3);
  shift << 0, 0, alpha;

  auto eval = [lin, shift, eps](const TorusPoint& p) {
    Vec out = lin * p.coords() + shift;
    out[0] += eps * std::sin(kTwoPi * p[2]);
    out[2] += eps * std::sin(kTwoPi * p[0]);
    return wrap(out);
  };
  auto jac = [lin, eps](const TorusPoint& p) {
    Mat j = lin;
    j(0, 2) += eps * kTwoPi * std::cos(kTwoPi * p[2]);
    j(2, 0) += eps * kTwoPi * std::cos(kTwoPi * p[0]);
    return j;
  };
  auto hess = [eps](const TorusPoint& p) {
    std::vector<Mat> h = zero_hessian(3);
    h[0](2, 2) = -eps * kTwoPi * kTwoPi * std::sin(kTwoPi * p[2]);
    h[2](0, 0) = -eps * kTwoPi * kTwoPi * std::sin(kTwoPi * p[0]);
    return h;
  };

  MapSpec map("perturbed_skew", 3, eval, jac, hess);
  map.with_linear_part(lin, shift).with_default_dims({1, 1, 1});
  if (eps != 0.0) {
    // Derivative-norm check on a 32^3 cell-centered grid.
    double worst = 0.0;
    const int n = 32;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          Vec x(3);
          x << (i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n;
          Mat dev = map.jacobian(TorusPoint(x)) - lin;
          worst = std::max(worst, dev.cwiseAbs().rowwise().sum().maxCoeff());
        }
      }
    }
    if (worst > kMaxDerivativeDeviation) {
      std::ostringstream msg;
      msg << "perturbed_skew: derivative-norm bound violated: sup ||Df - L||_inf = "
          << worst << " > " << kMaxDerivativeDeviation << " (eps = " << eps << ")";
      throw PreconditionError(msg.str());
    }
  } else {
    map.with_constant_jacobian(true);
  }
  return map;
}

MapSpec make_shear(int dim, int tgt, int src, double amplitude) {
  if (tgt == src) throw PreconditionError("make_shear: tgt must differ from src");
  if (tgt < 0 || tgt >= dim || src < 0 || src >= dim)
    throw PreconditionError("make_shear: component index out of range");

  auto eval = [tgt, src, amplitude](const TorusPoint& p) {
    Vec out = p.coords();
    out[tgt] += amplitude * std::sin(kTwoPi * p[src]);
    return wrap(out);
  };
  auto jac = [dim, tgt, src, amplitude](const TorusPoint& p) {
    Mat j = Mat::Identity(dim, dim);
    j(tgt, src) = amplitude * kTwoPi * std::cos(kTwoPi * p[src]);
    return j;
  };
  auto hess = [dim, tgt, src, amplitude](const TorusPoint& p) {
    std::vector<Mat> h = zero_hessian(dim);
    h[tgt](src, src) = -amplitude * kTwoPi * kTwoPi * std::sin(kTwoPi * p[src]);
    return h;
  };
  MapSpec map("shear", dim, eval, jac, hess);
  // The source coordinate is untouched, so the inverse is the same shear
  // with the opposite amplitude.
  map.with_inverse_hint([tgt, src, amplitude](const TorusPoint& q) {
    Vec out = q.coords();
    out[tgt] -= amplitude * std::sin(kTwoPi * q[src]);
    return wrap(out);
  });
  return map;
}

FamilySpec make_conjugated_family(const std::string& base, double amplitude) {
  int dim = 0;
  int tgt = 0;
  MapSpec f0 = [&]() -> MapSpec {
    if (base == "skew_product") {
      dim = 3;
      tgt = 2;
      return make_skew_product();
    }
    if (base == "linear_toral") {
      dim = 2;
      tgt = 1;
      return make_linear_toral();
    }
    throw PreconditionError("conjugated_family: unknown base '" + base + "'");
  }();
  const int src = 0;

  auto at = [f0, dim, tgt, src, amplitude](double t) {
    MapSpec psi = make_shear(dim, tgt, src, t * amplitude);
    MapSpec psi_inv = make_shear(dim, tgt, src, -t * amplitude);
    MapSpec ft = compose(psi, compose(f0, psi_inv));
    MapSpec named(
        "conjugated(" + f0.name() + ")", dim,
        [ft](const TorusPoint& p) { return ft.eval(p); },
        [ft](const TorusPoint& p) { return ft.jacobian(p); },
        [ft](const TorusPoint& p) { return ft.hessian(p); });
    named.with_linear_part(ft.linear_part(), ft.affine_shift());
    named.with_inverse_hint([ft](const TorusPoint& q) { return invert(ft, q, 1e-13); });
    if (f0.default_dims()) named.with_default_dims(*f0.default_dims());
    return named;
  };

  // d/ds f_s(p) at s = t, with w(p) = amplitude sin(2 pi p_src) e_tgt:
  //   g_t(p) = w(y) - Dpsi_t(y) Df0(x) w(p),
  // where x = psi_{-t}(p), y = f0(x).  Both shear identities
  // psi_t^{-1} = psi_{-t} and d/ds psi_{-s}(p) = -w(p) are exact.
  auto variation = [f0, dim, tgt, src, amplitude](double t, const TorusPoint& p) {
    auto w = [&](const TorusPoint& q) {
      Vec v = Vec::Zero(dim);
      v[tgt] = amplitude * std::sin(kTwoPi * q[src]);
      return v;
    };
    MapSpec psi_inv = make_shear(dim, tgt, src, -t * amplitude);
    MapSpec psi = make_shear(dim, tgt, src, t * amplitude);
    TorusPoint x = psi_inv.eval(p);
    TorusPoint y = f0.eval(x);
    Vec g = w(y) - psi.jacobian(y) * (f0.jacobian(x) * w(p));
    return g;
  };

  double radius = 0.15 / std::max(1.0, std::abs(amplitude));
  FamilySpec fam("conjugated_family(" + base + ")", dim, radius, at, variation,
                 Smoothness::C2);
  if (f0.default_dims()) fam.with_default_dims(*f0.default_dims());
  return fam;
}

FamilySpec make_rotation_family(double alpha) {
  FamilySpec fam(
      "rotation_family", 3, 0.25,
      [alpha](double t) { return make_skew_product(alpha + t); },
      [](double, const TorusPoint&) {
        Vec g(3);
        g << 0, 0, 1;
        return g;
      },
      Smoothness::C2);
  fam.with_default_dims({1, 1, 1});
  return fam;
}

ZooEntry map_zoo(const std::string& name,
                 const std::map<std::string, std::string>& params) {
  auto get = [&params](const std::string& key) -> const std::string* {
    auto it = params.find(key);
    return it == params.end() ? nullptr : &it->second;
  };

  if (name == "linear_toral") {
    reject_unknown_keys(params, {"A"});
    if (const std::string* a = get("A")) return make_linear_toral(parse_int_matrix(*a));
    return make_linear_toral();
  }
  if (name == "skew_product") {
    reject_unknown_keys(params, {"alpha"});
    double alpha = get("alpha") ? parse_double(*get("alpha"), "alpha") : kGoldenAlpha;
    return make_skew_product(alpha);
  }
  if (name == "perturbed_skew") {
    reject_unknown_keys(params, {"alpha", "epsilon"});
    double alpha = get("alpha") ? parse_double(*get("alpha"), "alpha") : kGoldenAlpha;
    double eps = get("epsilon") ? parse_double(*get("epsilon"), "epsilon") : 0.0;
    return make_perturbed_skew(eps, alpha);
  }
  if (name == "conjugated_family") {
    reject_unknown_keys(params, {"base", "amplitude"});
    std::string base = get("base") ? *get("base") : "skew_product";
    double amp = get("amplitude") ? parse_double(*get("amplitude"), "amplitude") : 1.0;
    return make_conjugated_family(base, amp);
  }
  if (name == "rotation_family") {
    reject_unknown_keys(params, {"alpha"});
    double alpha = get("alpha") ? parse_double(*get("alpha"), "alpha") : kGoldenAlpha;
    return make_rotation_family(alpha);
  }
  throw PreconditionError("map_zoo: unknown name '" + name + "'");
}

}  // namespace splitlab
