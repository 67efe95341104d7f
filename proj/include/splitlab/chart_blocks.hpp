#ifndef SPLITLAB_CHART_BLOCKS_HPP
#define SPLITLAB_CHART_BLOCKS_HPP

#include <vector>

#include "splitlab/chart.hpp"
#include "splitlab/map_spec.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab {

// Derivative data of the map written in the adapted (E^u | E^cs) charts at
// p and f(p).  a is the full chart derivative at 0 (block diagonal up to
// the invariance residual of the splitting); c_by_dir[k] is the derivative
// in the k-th chart direction of the (cs,u) graph block of the chart map,
// i.e. the curvature tensor contracted with e_k.
struct ChartBlocks {
  TorusPoint p;
  TorusPoint fp;
  Chart chart_p;
  Chart chart_fp;
  Mat a;
  Mat auu;
  Mat acscs;
  std::vector<Mat> c_by_dir;   // d entries, each (c+s) x u
  double offdiag_leakage = 0;  // largest off-diagonal entry of a
  double dropped_term_norm = 0;  // second term of the curvature formula at 0

  int u_dim() const { return static_cast<int>(auu.rows()); }
  int cs_dim() const { return static_cast<int>(acscs.rows()); }

  // Contraction of the curvature tensor with a chart direction.
  Mat c_contract(const Vec& chart_dir) const;
};

// Blocks at p from splittings at p and f(p); the chart grouping is
// {u},{c,s}.  Off-diagonal leakage of the chart derivative above
// offdiag_tol means the splittings are not converged.
ChartBlocks chart_blocks(const MapSpec& map, const Splitting& at_p,
                         const Splitting& at_fp, double offdiag_tol = 1e-8);

}  // namespace splitlab

#endif  // SPLITLAB_CHART_BLOCKS_HPP
