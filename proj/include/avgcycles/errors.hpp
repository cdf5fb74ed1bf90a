#pragma once

#include <stdexcept>
#include <string>

namespace avgcycles {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class DegenerateEigenvalue : public Error {
 public:
  using Error::Error;
};

/// build_f2 called on a spec whose first averaged function does not vanish.
class F1NotZero : public Error {
 public:
  F1NotZero(const std::string& what, double largest)
      : Error(what), largest_coefficient(largest) {}
  double largest_coefficient;
};

class InfeasibleConstraint : public Error {
 public:
  using Error::Error;
};

/// A generator target outside the image of the coefficient map.
class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

class FlowError : public Error {
 public:
  enum class Kind { denominator_vanished, r_crossed_zero, no_convergence };
  FlowError(Kind k, const std::string& what) : Error(what), kind(k) {}
  Kind kind;
};

class RootfindError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace avgcycles
