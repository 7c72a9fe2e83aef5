#pragma once

#include <stdexcept>
#include <string>

namespace fpc {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The requested operation is undefined for the given response family.
class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

/// A linear predictor or loss term left the representable range.
class NumericalOverflow : public Error {
 public:
  using Error::Error;
};

/// Response carries no information to fit (constant y, single class, no events).
class DegenerateResponse : public Error {
 public:
  using Error::Error;
};

/// Column has zero variance or too few distinct values to transform.
class DegenerateColumn : public Error {
 public:
  using Error::Error;
};

/// Self-normalized denominator is zero.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// An argument fell outside its admissible range.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Correlated null blocks are only defined for Gaussian columns.
class UnsupportedCorrelation : public Error {
 public:
  using Error::Error;
};

/// Iteration budget exhausted before the convergence criterion was met.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double lambda, long iterations)
      : Error(what), lambda(lambda), iterations(iterations) {}
  double lambda = 0.0;
  long iterations = 0;
};

/// The residual norm collapsed; the path cannot be extended.
class SaturatedFit : public Error {
 public:
  using Error::Error;
};

/// An input file or config could not be parsed or fails its schema.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// The lambda -> lambda_fpc mapping is not increasing where the search needs it.
class RegularityViolation : public Error {
 public:
  RegularityViolation(const std::string& what, int n_violations, double max_magnitude)
      : Error(what), n_violations(n_violations), max_magnitude(max_magnitude) {}
  int n_violations = 0;
  double max_magnitude = 0.0;
};

}  // namespace fpc
