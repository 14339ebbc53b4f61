#pragma once

#include <stdexcept>
#include <string>

namespace fermsea {

/// Invalid user input: bad flags, malformed config files, inconsistent
/// model/sea definitions. CLI exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure: quadrature consistency check failed, eigensolver
/// out of range, fit ill-conditioned. CLI exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's stated domain. CLI exit code 3.
struct domain_error : numeric_error {
  using numeric_error::numeric_error;
};

/// A degenerate ground space (or degenerate Fermi level) made the result
/// ambiguous; reported, not resolved. CLI exit code 3.
struct ambiguity_error : numeric_error {
  using numeric_error::numeric_error;
};

/// Requested combination is outside what this build implements. Exit code 4.
struct capability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fermsea
