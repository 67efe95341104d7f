#ifndef SPLITLAB_TORUS_HPP
#define SPLITLAB_TORUS_HPP

#include <Eigen/Core>

#include "splitlab/errors.hpp"

namespace splitlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A point of the flat torus T^d, every coordinate in [0,1).
class TorusPoint {
 public:
  // Requires coordinates already in [0,1); use wrap() to normalize raw input.
  explicit TorusPoint(Vec coords);

  const Vec& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

 private:
  Vec coords_;
};

// Reduce raw coordinates mod 1 into [0,1).  Rejects non-finite input.
TorusPoint wrap(const Vec& raw);

// The representative of q - p with every component in [-1/2, 1/2),
// ties broken toward -1/2.  wrap(p + displacement(p,q)) == q.
Vec displacement(const TorusPoint& p, const TorusPoint& q);

// wrap(p + dv).
TorusPoint translate(const TorusPoint& p, const Vec& dv);

}  // namespace splitlab

#endif  // SPLITLAB_TORUS_HPP
