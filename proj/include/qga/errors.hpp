#pragma once

#include <stdexcept>
#include <string>

namespace qga {

// A caller handed us data that breaks a documented precondition
// (non-unitary matrix, incomplete Kraus set, invalid density matrix, ...).
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Inconsistent pairing of options (e.g. reset state vs. cloning machine,
// or a stochastic channel used where a linear map is required).
struct ConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Problem too large for the requested dense code path.
struct SizeError : std::length_error {
  using std::length_error::length_error;
};

// Iterative eigensolver exhausted its budget; carries the best residual seen.
struct ConvergenceFailure : std::runtime_error {
  double best_residual;
  ConvergenceFailure(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
};

}  // namespace qga
