#pragma once

#include <stdexcept>
#include <string>

namespace jlp {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input: a precondition on arguments was violated.
class invalid_input : public error {
 public:
  using error::error;
};

/// Mathematically out-of-domain request (valid syntax, no defined answer).
class domain_error : public error {
 public:
  using error::error;
};

/// An iterative routine exhausted its budget. Carries the best estimate
/// reached so far so callers can decide whether it is still usable.
class no_convergence : public error {
 public:
  no_convergence(const std::string& what, double best_estimate)
      : error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace jlp
