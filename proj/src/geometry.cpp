#include "fermsea/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fermsea/entropy.hpp"
#include "fermsea/kernel.hpp"
#include "fermsea/quadrature.hpp"

namespace fermsea {

namespace {

Real wrap_abs(Real q) { return std::abs(wrap_pi(q)); }

/// Overlap length of an arc of length `a` with itself shifted by `s` on the
/// 2pi circle, s in [0, pi].
Real arc_overlap(Real a, Real s) {
  return std::max(0.0, a - s) + std::max(0.0, a + s - kTwoPi);
}

/// Intersection volume of two d-balls with radii r1, r2 and center distance t.
Real lens_volume(int d, Real r1, Real r2, Real t) {
  if (t >= r1 + r2) return 0.0;
  if (t <= std::abs(r1 - r2)) return ball_volume(d, std::min(r1, r2));
  switch (d) {
    case 1:
      return r1 + r2 - t;
    case 2: {
      const Real c1 = (t * t + r1 * r1 - r2 * r2) / (2.0 * t * r1);
      const Real c2 = (t * t + r2 * r2 - r1 * r1) / (2.0 * t * r2);
      const Real tri = 0.5 * std::sqrt(std::max(
          0.0, (-t + r1 + r2) * (t + r1 - r2) * (t - r1 + r2) * (t + r1 + r2)));
      return r1 * r1 * std::acos(std::clamp(c1, -1.0, 1.0)) +
             r2 * r2 * std::acos(std::clamp(c2, -1.0, 1.0)) - tri;
    }
    case 3: {
      const Real s = r1 + r2 - t;
      return kPi * s * s *
             (t * t + 2.0 * t * (r1 + r2) - 3.0 * (r1 - r2) * (r1 - r2)) /
             (12.0 * t);
    }
    default:
      throw capability_error("ball overlap volumes implemented for d <= 3");
  }
}

Real xi_interval(const IntervalProductSea& iv, const VectorR& q) {
  Real vol = 1.0, ov = 1.0;
  for (Index i = 0; i < q.size(); ++i) {
    const Real a = 2.0 * iv.half_widths[i];
    vol *= a;
    ov *= arc_overlap(a, wrap_abs(q[i]));
  }
  return vol - ov;
}

Real xi_balls(const BallUnionSea& bu, const VectorR& q, int d) {
  Real vol = 0.0;
  for (const auto& [c, r] : bu.balls) vol += ball_volume(d, r);
  // sea cap (sea - q) = sum over ball pairs and periodic images of lens
  // volumes; images are disjoint because every ball has diameter < 2pi.
  Real overlap = 0.0;
  const int n_images = static_cast<int>(std::pow(3, d));
  VectorR delta(d);
  for (const auto& [cj, rj] : bu.balls) {
    for (const auto& [cm, rm] : bu.balls) {
      for (int t = 0; t < n_images; ++t) {
        int rem = t;
        Real dist2 = 0.0;
        for (int i = 0; i < d; ++i) {
          const Real img = kTwoPi * (rem % 3 - 1);
          rem /= 3;
          const Real di = cj[i] - (cm[i] - q[i]) + img;
          dist2 += di * di;
        }
        overlap += lens_volume(d, rj, rm, std::sqrt(dist2));
      }
    }
  }
  return std::max(0.0, vol - overlap);
}

/// Unit-cell stripe autocorrelation: stripe [0,1) within period 2 shifted
/// by t in [0,2] overlaps itself on |1-t|... flipped: p(t) = |1 - t|.
Real stripe_overlap(Real t) { return std::abs(1.0 - t); }

Real xi_checkerboard(const CheckerboardSea& cb, const VectorR& q) {
  const Real l = kPi / cb.m;
  auto wrap_cell = [l](Real x) {
    Real u = std::fmod(x, 2.0 * l);
    if (u < 0.0) u += 2.0 * l;
    return u / l;  // in [0, 2)
  };
  const Real pu = stripe_overlap(wrap_cell(q[0]));
  const Real pv = stripe_overlap(wrap_cell(q[1]));
  const Real A = 2.0 * (pu * pv + (1.0 - pu) * (1.0 - pv));
  return static_cast<Real>(cb.m) * cb.m * l * l * (2.0 - A);
}

Real xi_grid(const GridIndicatorSea& g, const VectorR& q, int d) {
  // Both indicators are piecewise constant on the M^d cell grid, so the
  // integral is an exact sum of per-axis overlap weights.
  const int M = g.resolution;
  const Real h = kTwoPi / M;
  std::vector<int> shift(d);
  std::vector<Real> frac(d);
  for (int i = 0; i < d; ++i) {
    Real qi = q[i] - kTwoPi * std::floor(q[i] / kTwoPi);  // into [0, 2pi)
    const Real cells = qi / h;
    shift[i] = static_cast<int>(std::floor(cells)) % M;
    frac[i] = cells - std::floor(cells);  // in [0, 1)
  }
  const std::size_t n_cells = g.cells.size();
  const int n_combo = 1 << d;
  std::vector<int> idx(d, 0);
  Real covered = 0.0;
  std::size_t occupied = 0;
  for (std::size_t t = 0; t < n_cells; ++t) {
    if (g.cells[t]) {
      ++occupied;
      // integral of theta(k + q) over this cell
      Real cell_cov = 0.0;
      for (int combo = 0; combo < n_combo; ++combo) {
        Real w = 1.0;
        std::size_t nidx = 0;
        for (int i = 0; i < d; ++i) {
          const int bump = (combo >> i) & 1;
          w *= bump ? frac[i] : (1.0 - frac[i]);
          const int c = (idx[i] + shift[i] + bump) % M;
          nidx = nidx * M + static_cast<std::size_t>(c);
        }
        if (w > 0.0 && g.cells[nidx]) cell_cov += w;
      }
      covered += cell_cov;
    }
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == M) idx[axis--] = 0;
    if (axis < 0) break;
  }
  const Real cell_vol = std::pow(h, d);
  return (static_cast<Real>(occupied) - covered) * cell_vol;
}

Real xi_dispersion(const FermiSea& sea, const VectorR& q, const XiOptions& opts) {
  const int d = sea.dimension();
  if (d > 3)
    throw capability_error("grid evaluation of Xi supports d <= 3");
  const int M0 = opts.grid_points > 0 ? opts.grid_points
                                      : quadrature_grid_default(sea);
  auto eval = [&](int M) {
    const Real h = kTwoPi / M;
    std::vector<int> idx(d, 0);
    VectorR k(d), kq(d);
    Real sum = 0.0;
    for (;;) {
      for (int i = 0; i < d; ++i) k[i] = -kPi + (idx[i] + 0.5) * h;
      const Real w = occupation_weight(sea, k);
      if (w > 0.0) {
        for (int i = 0; i < d; ++i) kq[i] = k[i] + q[i];
        sum += w * (1.0 - occupation_weight(sea, kq));
      }
      int axis = d - 1;
      while (axis >= 0 && ++idx[axis] == M) idx[axis--] = 0;
      if (axis < 0) break;
    }
    return sum * std::pow(h, d);
  };
  const Real v1 = eval(M0);
  const Real v2 = eval(2 * M0);
  if (std::abs(v2 - v1) > opts.check_tolerance) {
    std::ostringstream ss;
    ss << "Xi grid resolution insufficient: value changed by "
       << std::abs(v2 - v1) << " under M->2M (M = " << M0 << ")";
    throw numeric_error(ss.str());
  }
  return v2;
}

}  // namespace

Real fejer(Real x, int L) {
  if (L < 1) throw domain_error("fejer requires L >= 1");
  const Real w = wrap_pi(x);
  const Real Ld = static_cast<Real>(L);
  if (w == 0.0) return Ld * Ld;
  if (std::abs(w) < 1e-6) {
    const Real y2 = 0.25 * w * w;
    const Real l2 = Ld * Ld;
    // F = L^2 [1 - (L^2-1) y^2 / 3 + ((L^2-1)^2/18 - (L^4-1)/90) y^4 + ...]
    return l2 * (1.0 - (l2 - 1.0) * y2 / 3.0 +
                 ((l2 - 1.0) * (l2 - 1.0) / 18.0 - (l2 * l2 - 1.0) / 90.0) *
                     y2 * y2);
  }
  const Real num = std::sin(0.5 * Ld * w);
  const Real den = std::sin(0.5 * w);
  return (num * num) / (den * den);
}

Real digamma_integer(long n) {
  if (n < 1) throw domain_error("digamma_integer requires n >= 1");
  if (n > 100000000L) throw domain_error("digamma_integer: n too large");
  Real h = 0.0;
  for (long k = n - 1; k >= 1; --k) h += 1.0 / static_cast<Real>(k);
  return -kEulerGamma + h;
}

FejerLinearSum fejer_linear_sum(int L) {
  if (L < 1) throw domain_error("fejer_linear_sum requires L >= 1");
  auto integrate = [L](int refine) {
    quad::Mesh m = quad::fejer_half_axis_mesh(L, refine);
    return quad::integrate(m, [L](Real x) { return fejer(x, L) * x; });
  };
  Real coarse = integrate(1);
  Real fine = integrate(2);
  if (std::abs(fine - coarse) > 1e-9 * std::max(1.0, std::abs(fine))) {
    coarse = fine;
    fine = integrate(4);
    if (std::abs(fine - coarse) > 1e-8 * std::max(1.0, std::abs(fine)))
      throw numeric_error("fejer_linear_sum quadrature failed to settle");
  }
  const Real formula =
      2.0 * (1.0 + kEulerGamma + std::log(2.0) + digamma_integer(L));
  return FejerLinearSum{fine, formula};
}

Real xi(const FermiSea& sea, const VectorR& q, const XiOptions& opts) {
  if (q.size() != sea.dimension())
    throw domain_error("xi: q has wrong dimension");
  // theta -> 1 - theta leaves Xi unchanged (|A \ (A-q)| = |A^c \ (A^c - q)|
  // on the torus), so the complement flag is immaterial here.
  const int d = sea.dimension();
  if (const auto* iv = sea.get_if<IntervalProductSea>()) return xi_interval(*iv, q);
  if (const auto* bu = sea.get_if<BallUnionSea>()) {
    if (d <= 3) return xi_balls(*bu, q, d);
    throw capability_error("analytic Xi for ball seas supports d <= 3");
  }
  if (const auto* cb = sea.get_if<CheckerboardSea>()) return xi_checkerboard(*cb, q);
  if (const auto* g = sea.get_if<GridIndicatorSea>()) return xi_grid(*g, q, d);
  return xi_dispersion(sea, q, opts);
}

XiProfile xi_profile(const FermiSea& sea, const std::vector<VectorR>& qs,
                     const XiOptions& opts) {
  XiProfile profile;
  profile.samples.reserve(qs.size());
  for (const auto& q : qs) profile.samples.push_back({q, xi(sea, q, opts)});
  return profile;
}

namespace {

std::vector<Real> axis_breakpoints(const FermiSea& sea) {
  std::vector<Real> bp;
  if (const auto* iv = sea.get_if<IntervalProductSea>()) {
    for (Index i = 0; i < iv->half_widths.size(); ++i) {
      const Real a = 2.0 * iv->half_widths[i];
      if (a > 0.0 && a < kPi) bp.push_back(a);
      if (kTwoPi - a > 0.0 && kTwoPi - a < kPi) bp.push_back(kTwoPi - a);
    }
  } else if (const auto* cb = sea.get_if<CheckerboardSea>()) {
    const Real l = kPi / cb->m;
    for (int k = 1; k < cb->m && k <= 64; ++k) bp.push_back(k * l);
  } else if (const auto* g = sea.get_if<GridIndicatorSea>()) {
    const Real h = kTwoPi / g->resolution;
    for (int k = 1; k * h < kPi && k <= 64; ++k) bp.push_back(k * h);
  }
  return bp;
}

bool xi_is_cheap(const FermiSea& sea) {
  if (sea.get_if<DispersionSea>() != nullptr) return false;
  if (const auto* g = sea.get_if<GridIndicatorSea>()) {
    const int cap = sea.dimension() == 1 ? 4096 : (sea.dimension() == 2 ? 128 : 32);
    return g->resolution <= cap;
  }
  return true;
}

}  // namespace

Real purity_via_fourier(const FermiSea& sea, int L) {
  const int d = sea.dimension();
  if (L < 1) throw domain_error("purity_via_fourier requires L >= 1");
  if (d > 3) throw capability_error("purity_via_fourier supports d <= 3");
  if (!xi_is_cheap(sea))
    throw capability_error(
        "purity_via_fourier needs a sea with closed-form Xi (interval, ball, "
        "checkerboard) or a modest grid; sample dispersion seas onto a grid "
        "first");
  const std::vector<Real> bp = axis_breakpoints(sea);
  auto eval = [&](int refine) {
    const quad::Mesh mesh = quad::fejer_axis_mesh(L, refine, bp);
    const std::size_t n = mesh.x.size();
    std::vector<Real> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = fejer(mesh.x[i], L);
    VectorR q(d);
    Real sum = 0.0;
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      Real wf = 1.0;
      for (int i = 0; i < d; ++i) {
        q[i] = mesh.x[idx[i]];
        wf *= mesh.w[idx[i]] * f[idx[i]];
      }
      sum += wf * xi(sea, q);
      int axis = d - 1;
      while (axis >= 0 && ++idx[axis] == n) idx[axis--] = 0;
      if (axis < 0) break;
    }
    return 4.0 * sum / std::pow(kTwoPi, 2 * d);
  };
  const Real v1 = eval(1);
  const Real v2 = eval(2);
  if (std::abs(v2 - v1) > 2.5e-4 * std::max(std::abs(v2), 1e-9))
    throw numeric_error(
        "purity_via_fourier quadrature did not settle: refinement moved the "
        "value by " + format_real(std::abs(v2 - v1)));
  return v2;
}

Real projected_area(const FermiSea& sea, const VectorR& direction) {
  const int d = sea.dimension();
  if (direction.size() != d)
    throw domain_error("projected_area: direction has wrong dimension");
  const Real norm = direction.norm();
  if (!(norm > 0.0)) throw domain_error("projected_area: zero direction");
  const VectorR u = direction / norm;
  if (const auto* bu = sea.get_if<BallUnionSea>()) {
    Real s = 0.0;
    for (const auto& [c, r] : bu->balls) s += ball_volume(d - 1, r);
    return s;
  }
  if (const auto* iv = sea.get_if<IntervalProductSea>()) {
    // Empty box has no surface; a full axis (w = pi) closes onto the torus
    // and contributes no face either.
    for (Index i = 0; i < iv->half_widths.size(); ++i)
      if (iv->half_widths[i] == 0.0) return 0.0;
    Real s = 0.0;
    for (Index i = 0; i < iv->half_widths.size(); ++i) {
      if (iv->half_widths[i] >= kPi) continue;
      Real face = 1.0;
      for (Index j = 0; j < iv->half_widths.size(); ++j)
        if (j != i) face *= 2.0 * iv->half_widths[j];
      s += std::abs(u[i]) * face;
    }
    return s;
  }
  throw capability_error(
      "projected_area is defined for ball and interval seas only");
}

namespace {

std::vector<VectorR> direction_set(int d, int n_dirs, std::uint64_t seed) {
  std::vector<VectorR> dirs;
  for (int i = 0; i < d; ++i) {
    VectorR e = VectorR::Zero(d);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  while (static_cast<int>(dirs.size()) < n_dirs + 2 * d) {
    VectorR v(d);
    for (int i = 0; i < d; ++i) v[i] = gauss(rng);
    const Real n = v.norm();
    if (n > 1e-6) dirs.push_back(v / n);
  }
  return dirs;
}

}  // namespace

SurfaceProjection sample_surface_projection(const FermiSea& sea, int n_dirs,
                                            std::uint64_t seed) {
  if (n_dirs < 1) throw domain_error("need at least one direction");
  SurfaceProjection sp;
  bool first = true;
  for (const auto& u : direction_set(sea.dimension(), n_dirs, seed)) {
    const Real s = projected_area(sea, u);
    sp.samples.emplace_back(u, s);
    sp.s_minus = first ? s : std::min(sp.s_minus, s);
    sp.s_plus = first ? s : std::max(sp.s_plus, s);
    first = false;
  }
  return sp;
}

ConeReport cone_check(const FermiSea& sea, Real eps, int n_dirs, int n_radii,
                      std::uint64_t seed, const XiOptions& opts) {
  if (!(eps > 0.0) || eps > kPi)
    throw domain_error("cone_check radius must lie in (0, pi]");
  if (n_dirs < 1 || n_radii < 1)
    throw domain_error("cone_check needs at least one direction and radius");
  const int d = sea.dimension();
  ConeReport report;
  report.tolerance = 1e-3 * std::pow(kTwoPi, d);
  const std::vector<VectorR> dirs = direction_set(d, n_dirs, seed);

  const bool analytic_s = sea.get_if<BallUnionSea>() != nullptr ||
                          sea.get_if<IntervalProductSea>() != nullptr;
  bool first = true;
  if (analytic_s) {
    for (const auto& u : dirs) {
      const Real s = projected_area(sea, u);
      report.s_minus = first ? s : std::min(report.s_minus, s);
      report.s_plus = first ? s : std::max(report.s_plus, s);
      first = false;
    }
  } else {
    report.empirical_slopes = true;
    const Real delta0 = eps / 64.0;
    for (const auto& u : dirs) {
      const Real s = xi(sea, VectorR(delta0 * u), opts) / delta0;
      report.s_minus = first ? s : std::min(report.s_minus, s);
      report.s_plus = first ? s : std::max(report.s_plus, s);
      first = false;
    }
  }

  for (const auto& u : dirs) {
    for (int t = 1; t <= n_radii; ++t) {
      const Real delta = eps * t / n_radii;
      ConeSample sample;
      sample.q = delta * u;
      sample.xi_value = xi(sea, sample.q, opts);
      sample.lower = report.s_minus * delta - report.tolerance;
      sample.upper = report.s_plus * delta + report.tolerance;
      sample.violation =
          sample.xi_value < sample.lower || sample.xi_value > sample.upper;
      if (sample.violation) ++report.violations;
      report.samples.push_back(std::move(sample));
    }
  }
  return report;
}

}  // namespace fermsea
