#pragma once

#include <stdexcept>
#include <string>

namespace qtrunc {

/// A time argument fell outside the short-time bound's validity window.
class ValidityError : public std::domain_error {
 public:
  ValidityError(const std::string& what, double max_time)
      : std::domain_error(what), max_time_(max_time) {}
  double max_time() const noexcept { return max_time_; }

 private:
  double max_time_;
};

/// A search ran past its configured cap (delta_max, threshold cap, grid size).
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension or memory guard tripped.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by otherwise well-formed input.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The finite-cutoff proxy is not converged for the requested experiment.
class PaddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver did not reach its tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtrunc
