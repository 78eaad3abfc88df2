#ifndef UNIPD_ERRORS_HPP
#define UNIPD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace unipd {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes do not agree with an operator/cone/function.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range (t <= 0, kappa < 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Point outside the domain of an extended-value function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Unsupported combination of problem pieces and solver options.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its cap; `best_estimate` is the last value computed.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

inline void require_dim(long got, long expected, const char* what) {
  if (got != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace unipd

#endif  // UNIPD_ERRORS_HPP
