#pragma once

#include <string>
#include <vector>

#include "fermsea/kernel.hpp"

namespace fermsea {

/// h(x) = -(1+x)/2 log (1+x)/2 - (1-x)/2 log (1-x)/2 in the given log base
/// (default bits). h(+-1) = 0 by limit; |x| > 1 is a domain error.
Real binary_entropy(Real x, Real base = 2.0);

/// h'(x) = (1/2) log_base((1-x)/(1+x)).
Real binary_entropy_derivative(Real x, Real base = 2.0);

/// Eigenvalues of a region matrix, ascending, clamped into [-1, 1].
/// Values outside by more than 1e-9 raise a numeric error.
struct Spectrum {
  VectorR eigenvalues;
};
Spectrum spectrum(const RegionMatrix& matrix);

/// Quadratic f(x) = a (1 - x^2) + b tangent to h at x0, dominating h on
/// [-1, 1] (verified on a grid at construction). Only x0 in (0, 1).
struct TangentBound {
  Real a, b, x0, base;
};
TangentBound tangent_upper_bound(Real x0, Real base = 2.0);

/// x0(L) = 1 - log(L)/L, clipped into [0, 1 - 1e-12]; L >= 2.
Real x0_schedule(int L);

/// tr(1 - gamma~^2) from the matrix entries (no eigensolve).
Real purity_lower_bound(const RegionMatrix& matrix);

struct EntropyReport {
  int d = 0;
  int L = 0;        ///< cube edge (bounding edge for voxel regions)
  Index n = 0;      ///< site count
  bool cube = true;
  Real S = 0.0;               ///< sum_j h(lambda_j), in `base`
  Real purity_lower = 0.0;    ///< tr(1 - gamma~^2), base-free
  Real tangent_upper = 0.0;   ///< a * tr(1 - gamma~^2) + b * n, in `base`
  Real a = 0.0, b = 0.0, x0 = 0.0;
  Real base = 2.0;

  /// The Eq.-style lower bound expressed in `base`: tr(1-g^2) * log_base(2).
  Real purity_lower_in_base() const;
};

EntropyReport block_entropy(const RegionMatrix& matrix, Real base = 2.0);
Real entropy_from_spectrum(const Spectrum& s, Real base = 2.0);

/// CSV row: d, L (or n for voxel regions), S, purity_lower, tangent_upper,
/// a, b, x0, base.
std::string entropy_csv_header();
std::string entropy_csv_row(const EntropyReport& r);
std::vector<EntropyReport> entropy_reports_from_csv(const std::string& text);

/// Deterministic numeric formatting shared by every CSV writer.
std::string format_real(Real v);

}  // namespace fermsea
