#ifndef COLE_ERRORS_HPP_
#define COLE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cole {

struct ColeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph operations need at least two nodes.
struct SingletonGraphError : ColeError {
  using ColeError::ColeError;
};

struct OutOfRangeError : ColeError {
  using ColeError::ColeError;
};

// Exact Shapley enumeration refused beyond the configured population size.
struct TooLargeError : ColeError {
  using ColeError::ColeError;
};

struct DimensionMismatchError : ColeError {
  using ColeError::ColeError;
};

struct ParseError : ColeError {
  using ColeError::ColeError;
};

struct InvalidParameterError : ColeError {
  using ColeError::ColeError;
};

// Power iteration ran out of iterations; carries the last residual seen.
struct NoConvergenceError : ColeError {
  NoConvergenceError(const std::string& what, double residual, int iterations)
      : ColeError(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

}  // namespace cole

#endif  // COLE_ERRORS_HPP_
