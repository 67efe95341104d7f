#include "splitlab/bunching.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "splitlab/errors.hpp"
#include "splitlab/util.hpp"

namespace splitlab {

RestrictionNorms restriction_norms(const Mat& jac, const Mat& basis) {
  if (basis.cols() == 0) return {1.0, 1.0};
  auto sv = Mat(jac * basis).jacobiSvd().singularValues();
  return {sv(0), sv(sv.size() - 1)};
}

std::string to_string(BunchingCondition c) {
  switch (c) {
    case BunchingCondition::ThmA_U:
      return "thmA_u";
    case BunchingCondition::StableDual:
      return "stable_dual";
    case BunchingCondition::DominatedRSE:
      return "dominated_RSE";
  }
  return "?";
}

BunchingCondition bunching_condition_from_string(const std::string& s) {
  if (s == "thmA_u") return BunchingCondition::ThmA_U;
  if (s == "stable_dual") return BunchingCondition::StableDual;
  if (s == "dominated_RSE") return BunchingCondition::DominatedRSE;
  throw PreconditionError("unknown bunching condition '" + s + "'");
}

double bunching_ratio(const MapSpec& map, const Splitting& splitting,
                      BunchingCondition condition) {
  Mat jac = map.jacobian(splitting.point);
  RestrictionNorms tu = restriction_norms(jac, splitting.eu.basis());
  RestrictionNorms tc =
      splitting.ec ? restriction_norms(jac, splitting.ec->basis()) : RestrictionNorms{};
  RestrictionNorms ts = restriction_norms(jac, splitting.es.basis());
  switch (condition) {
    case BunchingCondition::ThmA_U:
      return tc.norm / (tu.conorm * tc.conorm);
    case BunchingCondition::StableDual:
      return ts.norm * tc.bolicity();
    case BunchingCondition::DominatedRSE: {
      RestrictionNorms tcs = restriction_norms(jac, splitting.cs_or_es().basis());
      return tcs.norm / (tu.conorm * tc.conorm);
    }
  }
  throw PreconditionError("bunching_ratio: bad condition");
}

BunchingReport bunching_report(const MapSpec& map, SplitDims dims, int grid_n,
                               BunchingCondition condition, int n_push,
                               unsigned threads) {
  if (grid_n < 1) throw PreconditionError("bunching_report: grid resolution must be >= 1");
  const int d = map.dim();
  BunchingReport report;
  report.condition = condition;
  report.grid.assign(d, grid_n);

  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(grid_n);
  report.points.resize(total);

  parallel_for(total, threads, [&](std::size_t idx) {
    // Cell centers, last axis fastest.
    Vec x(d);
    std::size_t rem = idx;
    for (int axis = d - 1; axis >= 0; --axis) {
      x[axis] = (static_cast<double>(rem % grid_n) + 0.5) / grid_n;
      rem /= static_cast<std::size_t>(grid_n);
    }
    BunchingPointRecord& rec = report.points[idx];
    rec.point = x;
    try {
      Splitting s = compute_splitting(map, TorusPoint(x), dims, n_push);
      rec.ratio = bunching_ratio(map, s, condition);
      rec.ok = true;
    } catch (const Error& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });

  double sup = 0.0;
  int failures = 0;
  for (const auto& rec : report.points) {
    if (!rec.ok) {
      ++failures;
      continue;
    }
    sup = std::max(sup, rec.ratio);
  }
  report.sup = sup;
  report.n_failures = failures;
  report.pass = failures == 0 && sup < 1.0;
  return report;
}

}  // namespace splitlab
