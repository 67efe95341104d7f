#ifndef SPLITLAB_DERIV_SERIES_HPP
#define SPLITLAB_DERIV_SERIES_HPP

#include <vector>

#include "splitlab/map_spec.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab {

// Truncated series for the derivative of the unstable bundle along a
// center vector v at p.  value maps E^u_p-frame coordinates to
// E^cs_p-frame coordinates; the n-th term reads the chart curvature at
// f^{-n-1} p, contracted with v transported backward n+1 steps, and is
// carried to p by the n-th power of the linear graph transform.
struct SeriesResult {
  Mat value;  // (c+s) x u
  std::vector<double> term_norms;
  double tail_estimate = 0.0;
  double decay_ratio = 0.0;        // measured over the last terms
  double projection_defect = 0.0;  // ||v - proj_{E^c} v||
  int n_terms = 0;
};

SeriesResult dEu_dEc_series(const OrbitSplittings& splittings, const Vec& v,
                            int n_terms);

SeriesResult dEu_dEc_series(const MapSpec& map, const TorusPoint& p, const Vec& v,
                            int n_terms, SplitDims dims, int n_push = 60);

}  // namespace splitlab

#endif  // SPLITLAB_DERIV_SERIES_HPP
