#pragma once

#include <string>
#include <vector>

namespace fermsea::cli {

/// Subcommand dispatch: kernel-entry, entropy-sweep, xi-map, purity-check,
/// fejer-sum, fit-scaling, jw-check, selftest.
/// Exit codes: 0 success, 2 config error, 3 numeric/accuracy error,
/// 4 capability error. Errors print one machine-parsable line on stderr.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace fermsea::cli
