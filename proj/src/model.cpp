#include "fermsea/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fermsea {

namespace {

std::string offset_to_string(const Offset& o) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (i) ss << ',';
    ss << o[i];
  }
  return ss.str();
}

Offset negated(const Offset& o) {
  Offset n(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) n[i] = -o[i];
  return n;
}

}  // namespace

HoppingModel::HoppingModel(int dimension, std::map<Offset, Complex> hoppings,
                           Real chemical_potential)
    : d_(dimension), hoppings_(std::move(hoppings)), mu_(chemical_potential) {
  if (d_ < 1) throw config_error("model dimension must be >= 1");
  const Offset zero(d_, 0);
  if (!hoppings_.count(zero)) hoppings_[zero] = Complex(0.0, 0.0);
  for (const auto& [off, amp] : hoppings_) {
    if (static_cast<int>(off.size()) != d_)
      throw config_error("hopping offset has wrong dimension: " +
                         offset_to_string(off));
    auto it = hoppings_.find(negated(off));
    const Real tol = 1e-12 * std::max(1.0, std::abs(amp));
    if (it == hoppings_.end() || std::abs(it->second - std::conj(amp)) > tol)
      throw config_error("model invalid: non-Hermitian hoppings at offset " +
                         offset_to_string(off) +
                         " (need T_{-a} = conj(T_a))");
    for (int c : off) range_ = std::max(range_, std::abs(c));
    scale_ += std::abs(amp);
  }
  scale_ += std::abs(mu_);
  if (std::abs(hoppings_[zero].imag()) > 1e-12 * std::max(1.0, scale_))
    throw config_error("model invalid: T_0 must be real");
}

HoppingModel HoppingModel::nearest_neighbor(int dimension, Complex t, Real t0,
                                            Real chemical_potential) {
  std::map<Offset, Complex> h;
  h[Offset(dimension, 0)] = Complex(t0, 0.0);
  for (int axis = 0; axis < dimension; ++axis) {
    Offset plus(dimension, 0), minus(dimension, 0);
    plus[axis] = 1;
    minus[axis] = -1;
    h[plus] = t;
    h[minus] = std::conj(t);
  }
  return HoppingModel(dimension, std::move(h), chemical_potential);
}

Real dispersion_at(const HoppingModel& model, const VectorR& k) {
  if (k.size() != model.dimension())
    throw domain_error("dispersion_at: k has wrong dimension");
  Complex e(model.chemical_potential(), 0.0);
  for (const auto& [off, amp] : model.hoppings()) {
    Real phase = 0.0;
    for (int i = 0; i < model.dimension(); ++i) phase -= k[i] * off[i];
    e += amp * std::polar(1.0, phase);
  }
  const Real tol = 1e-12 * std::max(1.0, model.amplitude_scale());
  if (std::abs(e.imag()) > tol)
    throw numeric_error("dispersion has imaginary residue " +
                        std::to_string(e.imag()));
  return e.real();
}

FermiSea FermiSea::from_dispersion(HoppingModel model) {
  int d = model.dimension();
  return FermiSea(d, DispersionSea{std::move(model)});
}

FermiSea FermiSea::interval_product(VectorR half_widths, VectorR centers) {
  const int d = static_cast<int>(half_widths.size());
  if (d < 1) throw config_error("interval sea needs at least one axis");
  if (centers.size() == 0) centers = VectorR::Zero(d);
  if (centers.size() != d)
    throw config_error("interval sea: centers/half_widths size mismatch");
  for (int i = 0; i < d; ++i) {
    if (!(half_widths[i] >= 0.0 && half_widths[i] <= kPi))
      throw config_error("interval half-width must lie in [0, pi]");
    centers[i] = wrap_pi(centers[i]);
  }
  return FermiSea(d, IntervalProductSea{std::move(half_widths), std::move(centers)});
}

FermiSea FermiSea::interval_product(int dimension, Real half_width) {
  return interval_product(VectorR::Constant(dimension, half_width),
                          VectorR::Zero(dimension));
}

FermiSea FermiSea::ball_union(int dimension,
                              std::vector<std::pair<VectorR, Real>> balls) {
  if (dimension < 1) throw config_error("ball sea dimension must be >= 1");
  if (balls.empty()) throw config_error("ball sea needs at least one ball");
  for (auto& [c, r] : balls) {
    if (c.size() != dimension)
      throw config_error("ball center has wrong dimension");
    if (!(r > 0.0 && r < kPi))
      throw config_error("ball radius must lie in (0, pi)");
    c = wrap_bz(std::move(c));
  }
  // Pairwise disjoint after periodic wrapping, including self-images.
  std::vector<VectorR> images;
  {
    VectorR shift = VectorR::Zero(dimension);
    std::vector<int> idx(dimension, 0);
    const int n_images = static_cast<int>(std::pow(3, dimension));
    for (int t = 0; t < n_images; ++t) {
      int rem = t;
      for (int i = 0; i < dimension; ++i) {
        shift[i] = kTwoPi * (rem % 3 - 1);
        rem /= 3;
      }
      images.push_back(shift);
    }
  }
  for (std::size_t a = 0; a < balls.size(); ++a) {
    for (std::size_t b = a; b < balls.size(); ++b) {
      for (const auto& img : images) {
        if (a == b && img.isZero()) continue;
        const Real dist = (balls[a].first - balls[b].first + img).norm();
        if (dist < balls[a].second + balls[b].second - 1e-12)
          throw config_error("ball sea: balls overlap after periodic wrapping");
      }
    }
  }
  return FermiSea(dimension, BallUnionSea{std::move(balls)});
}

FermiSea FermiSea::checkerboard(int m) {
  if (m < 1) throw config_error("checkerboard divisor m must be >= 1");
  return FermiSea(2, CheckerboardSea{m});
}

FermiSea FermiSea::grid(int dimension, int resolution,
                        std::vector<std::uint8_t> cells) {
  if (dimension < 1) throw config_error("grid sea dimension must be >= 1");
  if (resolution < 1) throw config_error("grid sea resolution must be >= 1");
  std::size_t expected = 1;
  for (int i = 0; i < dimension; ++i) expected *= resolution;
  if (cells.size() != expected)
    throw config_error("grid sea: cell array size does not match resolution^d");
  for (auto c : cells)
    if (c > 1) throw config_error("grid sea: cells must be 0 or 1");
  return FermiSea(dimension, GridIndicatorSea{resolution, std::move(cells)});
}

FermiSea FermiSea::empty(int dimension) {
  return interval_product(dimension, 0.0);
}

FermiSea FermiSea::full(int dimension) {
  return interval_product(dimension, kPi);
}

FermiSea FermiSea::complement() const {
  FermiSea c = *this;
  c.complement_ = !c.complement_;
  return c;
}

namespace {

int base_indicator(const FermiSea& sea, const VectorR& kw) {
  return std::visit(
      [&](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DispersionSea>) {
          return dispersion_at(v.model, kw) < 0.0 ? 1 : 0;
        } else if constexpr (std::is_same_v<T, IntervalProductSea>) {
          for (Index i = 0; i < kw.size(); ++i)
            if (!(std::abs(wrap_pi(kw[i] - v.centers[i])) < v.half_widths[i]))
              return 0;
          return 1;
        } else if constexpr (std::is_same_v<T, BallUnionSea>) {
          for (const auto& [c, r] : v.balls) {
            Real d2 = 0.0;
            for (Index i = 0; i < kw.size(); ++i) {
              const Real di = wrap_pi(kw[i] - c[i]);
              d2 += di * di;
            }
            if (d2 < r * r) return 1;
          }
          return 0;
        } else if constexpr (std::is_same_v<T, CheckerboardSea>) {
          const Real l = kPi / v.m;
          const long px = static_cast<long>(std::floor(kw[0] / l));
          const long py = static_cast<long>(std::floor(kw[1] / l));
          return ((px + py) % 2 + 2) % 2 == 0 ? 1 : 0;
        } else {
          const GridIndicatorSea& g = v;
          const Real h = kTwoPi / g.resolution;
          std::size_t idx = 0;
          for (Index i = 0; i < kw.size(); ++i) {
            long c = static_cast<long>(std::floor((kw[i] + kPi) / h));
            c = std::clamp<long>(c, 0, g.resolution - 1);
            idx = idx * g.resolution + static_cast<std::size_t>(c);
          }
          return g.cells[idx];
        }
      },
      sea.variant());
}

}  // namespace

int indicator(const FermiSea& sea, const VectorR& k) {
  if (k.size() != sea.dimension())
    throw domain_error("indicator: k has wrong dimension");
  const int th = base_indicator(sea, wrap_bz(k));
  return sea.complemented() ? 1 - th : th;
}

Real occupation_weight(const FermiSea& sea, const VectorR& k) {
  if (k.size() != sea.dimension())
    throw domain_error("occupation_weight: k has wrong dimension");
  const VectorR kw = wrap_bz(k);
  Real w;
  if (const auto* disp = sea.get_if<DispersionSea>()) {
    const Real eps = dispersion_at(disp->model, kw);
    const Real tie = 1e-12 * std::max(1.0, disp->model.amplitude_scale());
    w = std::abs(eps) <= tie ? 0.5 : (eps < 0.0 ? 1.0 : 0.0);
  } else {
    w = static_cast<Real>(base_indicator(sea, kw));
  }
  return sea.complemented() ? 1.0 - w : w;
}

int filling_grid_default(int dimension) {
  switch (dimension) {
    case 1:
      return 65536;
    case 2:
      return 4096;
    case 3:
      return 320;
    default:
      return 48;
  }
}

Real filling(const FermiSea& sea) {
  const int d = sea.dimension();
  Real f = std::visit(
      [&](const auto& v) -> Real {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IntervalProductSea>) {
          Real p = 1.0;
          for (Index i = 0; i < v.half_widths.size(); ++i)
            p *= v.half_widths[i] / kPi;
          return p;
        } else if constexpr (std::is_same_v<T, BallUnionSea>) {
          Real vol = 0.0;
          for (const auto& [c, r] : v.balls) vol += ball_volume(d, r);
          return vol / std::pow(kTwoPi, d);
        } else if constexpr (std::is_same_v<T, CheckerboardSea>) {
          return 0.5;
        } else if constexpr (std::is_same_v<T, GridIndicatorSea>) {
          std::size_t count = 0;
          for (auto c : v.cells) count += c;
          return static_cast<Real>(count) / static_cast<Real>(v.cells.size());
        } else {
          // midpoint grid with tie-averaged weights
          const int M = filling_grid_default(d);
          const Real h = kTwoPi / M;
          std::vector<int> idx(d, 0);
          VectorR k(d);
          Real sum = 0.0;
          const DispersionSea& ds = v;
          const Real tie = 1e-12 * std::max(1.0, ds.model.amplitude_scale());
          for (;;) {
            for (int i = 0; i < d; ++i) k[i] = -kPi + (idx[i] + 0.5) * h;
            const Real eps = dispersion_at(ds.model, k);
            sum += std::abs(eps) <= tie ? 0.5 : (eps < 0.0 ? 1.0 : 0.0);
            int axis = d - 1;
            while (axis >= 0 && ++idx[axis] == M) idx[axis--] = 0;
            if (axis < 0) break;
          }
          return sum / std::pow(static_cast<Real>(M), d);
        }
      },
      sea.variant());
  return sea.complemented() ? 1.0 - f : f;
}

}  // namespace fermsea
