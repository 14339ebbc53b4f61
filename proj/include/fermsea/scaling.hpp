#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fermsea/entropy.hpp"

namespace fermsea {

enum class RegionShape { cube, ball };

struct SweepOptions {
  Real base = 2.0;
  EvalMode mode = EvalMode::automatic;
  QuadratureOptions quadrature;
  RegionShape shape = RegionShape::cube;
  bool fourier_check = false;  ///< also evaluate purity_via_fourier per L
  int threads = 0;             ///< 0 = default
  Index site_cap = 20000;
};

struct SweepRow {
  EntropyReport report;
  std::optional<Real> purity_fourier;
};

/// One entropy report per L, rows computed concurrently on a shared kernel.
std::vector<SweepRow> sweep(const FermiSea& sea, const std::vector<int>& L_list,
                            const SweepOptions& opts = {});

struct ScalingFit {
  int d = 0;
  Real c = 0.0;   ///< coefficient of L^{d-1} ln L
  Real c1 = 0.0;  ///< coefficient of L^{d-1} (identically 0 when d = 1)
  Real c0 = 0.0;  ///< constant
  Real residual_rms = 0.0;  ///< rms residual, in the rows' entropy base
  Real c_minus = 0.0;  ///< min_L S / (L^{d-1} ln L), rows with L >= 8
  Real c_plus = 0.0;   ///< max_L S / (L^{d-1} (ln L)^2), rows with L >= 8
  bool area_law_like = false;  ///< no log divergence detected (c ~ 0)
  Real base = 2.0;
  std::vector<int> rows_used;
};

/// Least squares in the basis {L^{d-1} ln L, L^{d-1}, 1} (the duplicate
/// column is dropped for d = 1) over rows with L >= min_L; needs >= 4 rows.
ScalingFit fit_scaling(const std::vector<EntropyReport>& rows, int d,
                       int min_L = 8);

struct SandwichViolation {
  int L;
  std::string what;
  Real amount;
};

struct SandwichReport {
  Real c_minus = 0.0;
  Real c_plus = 0.0;
  int rows_checked = 0;
  Real min_lower_slack = 0.0;  ///< min over rows of S - purity bound
  Real min_upper_slack = 0.0;  ///< min over rows of tangent bound - S
  bool area_law_like = false;
  std::vector<SandwichViolation> violations;
};

/// Per-row checks of the purity/tangent sandwich and of the extracted
/// c- L^{d-1} ln L <= S <= c+ L^{d-1} (ln L)^2 pair. Report-only.
SandwichReport sandwich_report(const std::vector<EntropyReport>& rows, int d);

std::string sweep_csv(const std::vector<SweepRow>& rows, bool fourier_column);
std::string scaling_fit_json(const ScalingFit& fit,
                             const SandwichReport* sandwich = nullptr);

}  // namespace fermsea
