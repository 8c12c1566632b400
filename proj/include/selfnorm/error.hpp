#pragma once

#include <stdexcept>
#include <string>

namespace selfnorm {

enum class ErrorKind {
  unsupported_degree,
  unsupported_order,
  domain,
  arity,
  non_convergence,
  grid_mismatch,
  precondition,
  degenerate_config,
  fit,
  invariant_violation,
  usage,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Quadrature ran out of subdivision depth; carries the best estimate reached.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_estimate)
      : Error(ErrorKind::non_convergence, what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace selfnorm
