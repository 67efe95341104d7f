#ifndef SPLITLAB_ERRORS_HPP
#define SPLITLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace splitlab {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Violated caller contract (bad argument ranges, missing data, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A geometric object collapsed: rank loss in QR, near-parallel blocks,
// an intersection of the wrong dimension.  Carries the offending value.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& msg, double value)
      : Error(msg), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

// Iteration failed to reach tolerance; carries the final residual.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& msg, double residual)
      : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A series whose terms stopped decaying.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& msg, double ratio)
      : Error(msg), ratio_(ratio) {}
  double ratio() const { return ratio_; }

 private:
  double ratio_;
};

// The derivative blocks do not have the structure the splitting promises
// (off-diagonal leakage above tolerance: the splitting is not converged).
class MisalignedSplittingError : public Error {
 public:
  MisalignedSplittingError(const std::string& msg, double leakage)
      : Error(msg), leakage_(leakage) {}
  double leakage() const { return leakage_; }

 private:
  double leakage_;
};

// A Neumann branch grew in the direction it was classified to contract.
class SolverBranchError : public Error {
 public:
  SolverBranchError(const std::string& msg, const std::string& block)
      : Error(msg), block_(block) {}
  const std::string& block() const { return block_; }

 private:
  std::string block_;
};

// Graph coordinates left the unit chart (finite-difference step too large).
class ChartOverflowError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace splitlab

#endif  // SPLITLAB_ERRORS_HPP
