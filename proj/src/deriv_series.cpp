#include "splitlab/deriv_series.hpp"

#include <Eigen/LU>
#include <cmath>

#include "splitlab/bunching.hpp"
#include "splitlab/chart_blocks.hpp"
#include "splitlab/errors.hpp"

namespace splitlab {

SeriesResult dEu_dEc_series(const OrbitSplittings& splittings, const Vec& v,
                            int n_terms) {
  if (n_terms < 1) throw PreconditionError("dEu_dEc_series: need N >= 1");
  const SplitDims dims = splittings.dims();
  const int u = dims.u;
  const int cs = dims.c + dims.s;
  const MapSpec& map = splittings.ctx().map();
  if (v.size() != map.dim())
    throw DimensionMismatchError("dEu_dEc_series: v has wrong dimension");

  SeriesResult out;
  out.n_terms = n_terms;
  out.value = Mat::Zero(cs, u);

  const Splitting& s0 = splittings.at(0);
  Vec v_proj = dims.c > 0 ? Vec(s0.ec->project(v)) : Vec(Vec::Zero(map.dim()));
  out.projection_defect = (v - v_proj).norm();
  out.term_norms.assign(static_cast<std::size_t>(n_terms), 0.0);
  if (v_proj.norm() == 0.0) return out;  // linear in v, and 0 maps to 0

  // Pointwise bunching along the orbit actually used; the fiber contraction
  // must dominate or the transported terms are meaningless.
  double bunching_sup = 0.0;
  for (int k = 0; k <= n_terms; ++k) {
    const Splitting& s = splittings.at(-k);
    bunching_sup =
        std::max(bunching_sup, bunching_ratio(map, s, BunchingCondition::ThmA_U));
  }
  if (bunching_sup >= 1.0)
    throw PreconditionError(
        "dEu_dEc_series: bunching ratio >= 1 along the backward orbit");

  Mat x_acc = Mat::Identity(u, u);    // T^u_p f^{-n}, frame coordinates
  Mat y_acc = Mat::Identity(cs, cs);  // T^cs f^n from f^{-n} p to p
  Vec v_trans = v_proj;               // center transport of v to f^{-n-1} p

  // Chart blocks cached per orbit index.
  std::map<int, ChartBlocks> blocks;
  auto block_at = [&](int idx) -> const ChartBlocks& {
    auto it = blocks.find(idx);
    if (it == blocks.end())
      it = blocks
               .emplace(idx, chart_blocks(map, splittings.at(idx),
                                          splittings.at(idx + 1)))
               .first;
    return it->second;
  };

  for (int n = 0; n < n_terms; ++n) {
    // v at f^{-n-1} p: one more inverse tangent step, projected back onto
    // the computed center plane (the defect is pure numerical drift).
    v_trans = splittings.at(-n - 1).ec->project(
        splittings.ctx().jac_inv(-n - 1) * v_trans);

    const ChartBlocks& cb = block_at(-n - 1);
    Vec xi = cb.chart_p.tangent_coords(v_trans);
    Mat g = cb.c_contract(xi);  // E^u_{f^{-n}p} -> E^cs_{f^{-n}p}

    Mat term = y_acc * g * x_acc;
    out.value += term;
    out.term_norms[static_cast<std::size_t>(n)] = term.norm();

    // Extend the transports for the next term.
    const ChartBlocks& cb_next = cb;  // blocks at f^{-n-1}p map to f^{-n}p
    x_acc = cb_next.auu.partialPivLu().solve(x_acc);
    y_acc = y_acc * cb_next.acscs;

    // Divergence watch over the last 5 ratios.
    if (n >= 5) {
      bool growing = true;
      for (int j = n - 4; j <= n; ++j) {
        double prev = out.term_norms[static_cast<std::size_t>(j - 1)];
        double cur = out.term_norms[static_cast<std::size_t>(j)];
        if (prev <= 1e-300 || cur < prev) {
          growing = false;
          break;
        }
      }
      if (growing && out.term_norms[static_cast<std::size_t>(n)] > 1e-16) {
        double ratio = out.term_norms[static_cast<std::size_t>(n)] /
                       out.term_norms[static_cast<std::size_t>(n - 5)];
        throw DivergenceError(
            "dEu_dEc_series: term growth over the last 5 terms; bunching failure "
            "or unconverged splitting",
            std::pow(ratio, 0.2));
      }
    }
  }

  // Measured decay ratio over the last terms and the geometric tail bound.
  int window = std::min(10, n_terms - 1);
  double log_sum = 0.0;
  int count = 0;
  for (int n = n_terms - window; n < n_terms; ++n) {
    double prev = out.term_norms[static_cast<std::size_t>(n - 1)];
    double cur = out.term_norms[static_cast<std::size_t>(n)];
    if (prev > 1e-300 && cur > 1e-300) {
      log_sum += std::log(cur / prev);
      ++count;
    }
  }
  if (count > 0) {
    out.decay_ratio = std::exp(log_sum / count);
    double last = out.term_norms.back();
    out.tail_estimate = out.decay_ratio < 1.0
                            ? last * out.decay_ratio / (1.0 - out.decay_ratio)
                            : std::numeric_limits<double>::infinity();
  }
  return out;
}

SeriesResult dEu_dEc_series(const MapSpec& map, const TorusPoint& p, const Vec& v,
                            int n_terms, SplitDims dims, int n_push) {
  OrbitSplittings splittings(map, p, dims, n_push);
  return dEu_dEc_series(splittings, v, n_terms);
}

}  // namespace splitlab
