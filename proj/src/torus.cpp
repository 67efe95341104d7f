#include "splitlab/torus.hpp"

#include <cmath>

namespace splitlab {

TorusPoint::TorusPoint(Vec coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0) throw PreconditionError("TorusPoint: empty coordinates");
  for (int i = 0; i < coords_.size(); ++i) {
    double c = coords_[i];
    if (!std::isfinite(c)) throw NonFiniteError("TorusPoint: non-finite coordinate");
    if (c < 0.0 || c >= 1.0)
      throw PreconditionError("TorusPoint: coordinate outside [0,1); call wrap()");
  }
}

TorusPoint wrap(const Vec& raw) {
  Vec out(raw.size());
  for (int i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) throw NonFiniteError("wrap: non-finite input");
    double f = raw[i] - std::floor(raw[i]);
    if (f >= 1.0) f = 0.0;  // rounding at the seam, e.g. raw = -1e-17
    out[i] = f;
  }
  return TorusPoint(out);
}

Vec displacement(const TorusPoint& p, const TorusPoint& q) {
  if (p.dim() != q.dim())
    throw DimensionMismatchError("displacement: dimension mismatch");
  Vec d(p.dim());
  for (int i = 0; i < p.dim(); ++i) {
    double delta = q[i] - p[i];
    double r = delta - std::floor(delta + 0.5);
    if (r >= 0.5) r = -0.5;  // keep the half-open convention exactly
    d[i] = r;
  }
  return d;
}

TorusPoint translate(const TorusPoint& p, const Vec& dv) {
  if (p.dim() != dv.size())
    throw DimensionMismatchError("translate: dimension mismatch");
  return wrap(p.coords() + dv);
}

}  // namespace splitlab
