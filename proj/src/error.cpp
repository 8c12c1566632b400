#include "selfnorm/error.hpp"

namespace selfnorm {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::unsupported_degree: return "unsupported-degree";
    case ErrorKind::unsupported_order: return "unsupported-order";
    case ErrorKind::domain: return "domain";
    case ErrorKind::arity: return "arity";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::degenerate_config: return "degenerate-config";
    case ErrorKind::fit: return "fit";
    case ErrorKind::invariant_violation: return "invariant-violation";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

}  // namespace selfnorm
