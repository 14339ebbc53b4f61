#include "fermsea/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fermsea/geometry.hpp"
#include "fermsea/parallel.hpp"

namespace fermsea {

std::vector<SweepRow> sweep(const FermiSea& sea, const std::vector<int>& L_list,
                            const SweepOptions& opts) {
  if (L_list.empty()) throw config_error("sweep needs a nonempty L list");
  for (std::size_t i = 0; i < L_list.size(); ++i) {
    if (L_list[i] < 1) throw config_error("sweep: L values must be >= 1");
    if (i > 0 && L_list[i] <= L_list[i - 1])
      throw config_error("sweep: L list must be strictly increasing");
  }
  CorrelationKernel kernel(sea, opts.mode, opts.quadrature);
  const int d = sea.dimension();
  auto make_region = [&](int L) {
    return opts.shape == RegionShape::cube ? Region::cube(d, L)
                                           : Region::ball(d, L);
  };
  {
    // Warm the shared cache with the largest region once so the parallel
    // rows below only read.
    Region largest = make_region(L_list.back());
    if (largest.site_count() > opts.site_cap)
      throw domain_error("largest sweep region exceeds the site cap");
    kernel.warm(largest);
  }
  std::vector<SweepRow> rows(L_list.size());
  parallel_for(static_cast<Index>(L_list.size()), opts.threads, [&](Index i) {
    const Region region = make_region(L_list[static_cast<std::size_t>(i)]);
    const RegionMatrix m = build_region_matrix(kernel, region, opts.site_cap);
    SweepRow row;
    row.report = block_entropy(m, opts.base);
    if (opts.fourier_check && region.is_cube())
      row.purity_fourier =
          purity_via_fourier(sea, L_list[static_cast<std::size_t>(i)]);
    rows[static_cast<std::size_t>(i)] = std::move(row);
  });
  return rows;
}

ScalingFit fit_scaling(const std::vector<EntropyReport>& rows, int d,
                       int min_L) {
  if (d < 1) throw domain_error("fit_scaling: d must be >= 1");
  std::vector<const EntropyReport*> used;
  for (const auto& r : rows)
    if (r.L >= min_L) used.push_back(&r);
  if (used.size() < 4)
    throw numeric_error("fit_scaling needs >= 4 rows with L >= " +
                        std::to_string(min_L));

  const int n_basis = d == 1 ? 2 : 3;  // {ln L, 1} vs {L^{d-1} ln L, L^{d-1}, 1}
  MatrixR A(static_cast<Index>(used.size()), n_basis);
  VectorR y(static_cast<Index>(used.size()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    const Real L = static_cast<Real>(used[i]->L);
    const Real lead = std::pow(L, d - 1);
    A(static_cast<Index>(i), 0) = lead * std::log(L);
    if (n_basis == 3) A(static_cast<Index>(i), 1) = lead;
    A(static_cast<Index>(i), n_basis - 1) = 1.0;
    y[static_cast<Index>(i)] = used[i]->S;
  }
  Eigen::ColPivHouseholderQR<MatrixR> qr(A);
  if (qr.rank() < n_basis)
    throw numeric_error("fit_scaling: basis is rank deficient (L list too "
                        "short or clustered)");
  {
    const MatrixR& R = qr.matrixR();
    Real dmax = 0.0, dmin = std::numeric_limits<Real>::max();
    for (int i = 0; i < n_basis; ++i) {
      const Real v = std::abs(R(i, i));
      dmax = std::max(dmax, v);
      dmin = std::min(dmin, v);
    }
    if (dmin <= 0.0 || dmax / dmin > 1e12)
      throw numeric_error("fit_scaling: basis ill-conditioned for this L list");
  }
  const VectorR coef = qr.solve(y);

  ScalingFit fit;
  fit.d = d;
  fit.base = used.front()->base;
  fit.c = coef[0];
  fit.c1 = n_basis == 3 ? coef[1] : 0.0;
  fit.c0 = coef[n_basis - 1];
  fit.residual_rms = std::sqrt((A * coef - y).squaredNorm() /
                               static_cast<Real>(used.size()));
  bool first = true;
  for (const auto* r : used) {
    const Real L = static_cast<Real>(r->L);
    const Real lead = std::pow(L, d - 1);
    const Real lo = r->S / (lead * std::log(L));
    const Real hi = r->S / (lead * std::log(L) * std::log(L));
    fit.c_minus = first ? lo : std::min(fit.c_minus, lo);
    fit.c_plus = first ? hi : std::max(fit.c_plus, hi);
    first = false;
    fit.rows_used.push_back(r->L);
  }
  fit.area_law_like =
      std::abs(fit.c) <= 1e-3 * std::max({1.0, std::abs(fit.c0), std::abs(fit.c1)});
  return fit;
}

SandwichReport sandwich_report(const std::vector<EntropyReport>& rows, int d) {
  SandwichReport report;
  if (rows.empty()) return report;

  // Extract c_minus / c_plus from rows with L >= 8 when enough are present.
  std::vector<EntropyReport> asymptotic;
  for (const auto& r : rows)
    if (r.L >= 8) asymptotic.push_back(r);
  bool have_pair = asymptotic.size() >= 4;
  if (have_pair) {
    try {
      const ScalingFit fit = fit_scaling(asymptotic, d, 8);
      report.c_minus = fit.c_minus;
      report.c_plus = fit.c_plus;
      report.area_law_like = fit.area_law_like;
    } catch (const numeric_error&) {
      have_pair = false;  // degenerate rows (equal L etc.); skip the pair
    }
  }

  bool first = true;
  for (const auto& r : rows) {
    ++report.rows_checked;
    const Real lower = r.purity_lower_in_base();
    const Real lower_slack = r.S - lower;
    const Real upper_slack = r.tangent_upper - r.S;
    report.min_lower_slack = first ? lower_slack
                                   : std::min(report.min_lower_slack, lower_slack);
    report.min_upper_slack = first ? upper_slack
                                   : std::min(report.min_upper_slack, upper_slack);
    first = false;
    if (lower_slack < -1e-9)
      report.violations.push_back(
          {r.L, "purity lower bound exceeds S", -lower_slack});
    if (upper_slack < -1e-9)
      report.violations.push_back(
          {r.L, "S exceeds tangent upper bound", -upper_slack});
    if (have_pair && r.L >= 8) {
      const Real L = static_cast<Real>(r.L);
      const Real lead = std::pow(L, d - 1);
      const Real lo = report.c_minus * lead * std::log(L);
      const Real hi = report.c_plus * lead * std::log(L) * std::log(L);
      if (r.S < lo - 1e-9)
        report.violations.push_back({r.L, "S below c- L^{d-1} ln L", lo - r.S});
      if (r.S > hi + 1e-9)
        report.violations.push_back(
            {r.L, "S above c+ L^{d-1} (ln L)^2", r.S - hi});
    }
  }
  return report;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool fourier_column) {
  std::ostringstream out;
  out << "# fermsea csv v1 entropy-sweep\n";
  out << entropy_csv_header();
  if (fourier_column) out << ",purity_fourier";
  out << '\n';
  for (const auto& row : rows) {
    out << entropy_csv_row(row.report);
    if (fourier_column)
      out << ','
          << (row.purity_fourier ? format_real(*row.purity_fourier) : "nan");
    out << '\n';
  }
  return out.str();
}

std::string scaling_fit_json(const ScalingFit& fit,
                             const SandwichReport* sandwich) {
  nlohmann::json j;
  j["d"] = fit.d;
  j["base"] = fit.base;
  j["coefficients"] = {{"c", fit.c}, {"c1", fit.c1}, {"c0", fit.c0}};
  j["residual_rms"] = fit.residual_rms;
  j["c_minus"] = fit.c_minus;
  j["c_plus"] = fit.c_plus;
  j["rows_used"] = fit.rows_used;
  j["area_law_like"] = fit.area_law_like;
  if (fit.area_law_like) j["note"] = "area-law-like, no log divergence";
  if (sandwich) {
    nlohmann::json s;
    s["rows_checked"] = sandwich->rows_checked;
    s["min_lower_slack"] = sandwich->min_lower_slack;
    s["min_upper_slack"] = sandwich->min_upper_slack;
    s["violations"] = nlohmann::json::array();
    for (const auto& v : sandwich->violations)
      s["violations"].push_back(
          {{"L", v.L}, {"what", v.what}, {"amount", v.amount}});
    j["sandwich"] = s;
  }
  return j.dump(2) + "\n";
}

}  // namespace fermsea
