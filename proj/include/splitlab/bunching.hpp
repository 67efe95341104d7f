#ifndef SPLITLAB_BUNCHING_HPP
#define SPLITLAB_BUNCHING_HPP

#include <string>
#include <vector>

#include "splitlab/map_spec.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab {

// Operator norm and conorm of the restriction of jac to the span of an
// orthonormal basis, measured in the Euclidean metric.  An empty basis
// (trivial bundle) returns 1 for both, so Anosov maps flow through the
// same code paths.
struct RestrictionNorms {
  double norm = 1.0;
  double conorm = 1.0;
  double bolicity() const { return norm / conorm; }
};
RestrictionNorms restriction_norms(const Mat& jac, const Mat& basis);

enum class BunchingCondition {
  ThmA_U,        // ||T^c f|| / (m(T^u f) m(T^c f))
  StableDual,    // ||T^s f|| bol(T^c f)
  DominatedRSE,  // ||T^S f|| / (m(T^R f) m(T^E f)) with R=E^u, S=E^cs, E=E^c
};

std::string to_string(BunchingCondition c);
BunchingCondition bunching_condition_from_string(const std::string& s);

// The pointwise ratio of the chosen condition at one splitting.
double bunching_ratio(const MapSpec& map, const Splitting& splitting,
                      BunchingCondition condition);

struct BunchingPointRecord {
  Vec point;
  double ratio = 0.0;
  bool ok = false;
  std::string error;  // empty when ok
};

struct BunchingReport {
  BunchingCondition condition = BunchingCondition::ThmA_U;
  std::vector<int> grid;  // resolution per axis
  std::string metric = "euclidean";
  std::vector<BunchingPointRecord> points;
  double sup = 0.0;
  int n_failures = 0;
  bool pass = false;  // sup < 1 and every grid point succeeded
};

// Evaluate the condition on a cell-centered grid ((i+0.5)/n per axis).
// Failures at single points are recorded, not fatal.
BunchingReport bunching_report(const MapSpec& map, SplitDims dims, int grid_n,
                               BunchingCondition condition, int n_push,
                               unsigned threads = 1);

}  // namespace splitlab

#endif  // SPLITLAB_BUNCHING_HPP
