#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fermsea {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// Runs the documented module invariants (periodicity, Hermiticity,
/// particle-hole symmetry, sandwich bounds, Fejér facts, Fourier identity,
/// Jordan-Wigner equivalence, ...) at desk scale.
std::vector<CheckResult> run_selftest(int threads = 0,
                                      std::uint64_t seed = 12345);

}  // namespace fermsea
