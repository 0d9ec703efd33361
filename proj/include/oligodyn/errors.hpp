#pragma once

#include <stdexcept>
#include <string>

namespace oligodyn {

/** Rejected model or solver inputs: bad grids, out-of-range parameters, malformed files. */
class InvalidParams : public std::runtime_error {
 public:
  explicit InvalidParams(const std::string& msg) : std::runtime_error(msg) {}
};

/** Base class for solver failures that leave no usable result. */
class ConvergenceFailure : public std::runtime_error {
 public:
  explicit ConvergenceFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/** Iteration budget exhausted before the residual tolerance was met. */
class MaxIterExceeded : public ConvergenceFailure {
 public:
  MaxIterExceeded(const std::string& msg, int iterations, double last_residual)
      : ConvergenceFailure(msg), iterations(iterations), last_residual(last_residual) {}
  int iterations;
  double last_residual;
};

/** A residual scan found a root count other than one where uniqueness was required. */
class MultipleRoots : public ConvergenceFailure {
 public:
  MultipleRoots(const std::string& msg, int sign_changes)
      : ConvergenceFailure(msg), sign_changes(sign_changes) {}
  int sign_changes;
};

/** Residual evaluated to a non-finite value during bracketing or bisection. */
class NonFinite : public ConvergenceFailure {
 public:
  NonFinite(const std::string& msg, double at) : ConvergenceFailure(msg), at(at) {}
  double at;
};

/** Bracket expansion reached its limit without finding a sign change. */
class NoSignChange : public std::runtime_error {
 public:
  NoSignChange(const std::string& msg, double lo, double hi)
      : std::runtime_error(msg), lo(lo), hi(hi) {}
  double lo;
  double hi;
};

/** A file could not be read or written. */
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace oligodyn
