#include "fermsea/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace fermsea {

namespace {

bool is_interval_family(const FermiSea& sea) {
  return sea.get_if<IntervalProductSea>() != nullptr;
}

int linf(const VectorI& x) {
  int m = 0;
  for (Index i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

/// Midpoint samples of 1 - 2 theta over the grid, values in {-1, 0, +1}
/// (0 only on exact dispersion ties). Row-major, axis 0 slowest.
std::vector<signed char> sample_symbol(const FermiSea& sea, int M) {
  const int d = sea.dimension();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(M);
  std::vector<signed char> s(total);
  std::vector<int> idx(d, 0);
  VectorR k(d);
  const Real h = kTwoPi / M;
  for (std::size_t t = 0;; ++t) {
    for (int i = 0; i < d; ++i) k[i] = -kPi + (idx[i] + 0.5) * h;
    const Real w = occupation_weight(sea, k);
    s[t] = static_cast<signed char>(std::lround(1.0 - 2.0 * w));
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == M) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return s;
}

}  // namespace

int quadrature_grid_default(const FermiSea& sea) {
  int M;
  switch (sea.dimension()) {
    case 1: M = 4096; break;
    case 2: M = 1024; break;
    case 3: M = 256; break;
    default: M = 32; break;
  }
  // Snap so piecewise-constant seas are sampled exactly.
  if (const auto* cb = sea.get_if<CheckerboardSea>()) {
    const int cell = 2 * cb->m;
    M = std::max(cell, (M / cell) * cell);
  } else if (const auto* g = sea.get_if<GridIndicatorSea>()) {
    const int cell = g->resolution;
    M = std::max(cell, (M / cell) * cell);
  }
  return M;
}

CorrelationKernel::CorrelationKernel(FermiSea sea, EvalMode mode,
                                     QuadratureOptions opts)
    : sea_(std::move(sea)), mode_(mode), opts_(opts) {
  if (mode_ == EvalMode::automatic)
    mode_ = is_interval_family(sea_) ? EvalMode::analytic : EvalMode::fft_grid;
  if (mode_ == EvalMode::analytic && !is_interval_family(sea_))
    throw capability_error(
        "analytic kernel entries are only available for interval-product seas");
  if (mode_ != EvalMode::analytic && sea_.dimension() > 4)
    throw capability_error("quadrature kernels support d <= 4");
  grid_m_ = opts_.grid_points > 0 ? opts_.grid_points
                                  : quadrature_grid_default(sea_);
  if (grid_m_ < 2) throw config_error("quadrature grid must have >= 2 nodes");
}

Complex CorrelationKernel::analytic_entry(const VectorI& x) const {
  const auto* iv = sea_.get_if<IntervalProductSea>();
  bool zero_offset = true;
  Complex prod(1.0, 0.0);
  for (Index i = 0; i < x.size(); ++i) {
    const Real w = iv->half_widths[i];
    const Real c = iv->centers[i];
    if (x[i] == 0) {
      prod *= w / kPi;
    } else {
      zero_offset = false;
      prod *= std::polar(1.0, c * x[i]) * (std::sin(w * x[i]) / (kPi * x[i]));
    }
  }
  Complex g = (zero_offset ? 1.0 : 0.0) - 2.0 * prod;
  return sea_.complemented() ? -g : g;
}

Complex CorrelationKernel::quadrature_entry(const VectorI& x, int M) const {
  const int d = sea_.dimension();
  const Real h = kTwoPi / M;
  std::vector<int> idx(d, 0);
  VectorR k(d);
  Complex sum(0.0, 0.0);
  for (;;) {
    for (int i = 0; i < d; ++i) k[i] = -kPi + (idx[i] + 0.5) * h;
    const Real w = occupation_weight(sea_, k);
    if (w != 0.5) {  // symbol value is 0 on ties, skip
      Real phase = 0.0;
      for (int i = 0; i < d; ++i) phase += k[i] * x[i];
      sum += (1.0 - 2.0 * w) * std::polar(1.0, phase);
    }
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == M) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return sum / std::pow(static_cast<Real>(M), d);
}

Complex CorrelationKernel::extrapolated_entry(const VectorI& x) const {
  const Complex vm = quadrature_entry(x, grid_m_);
  const Complex v2m = quadrature_entry(x, 2 * grid_m_);
  return (4.0 * v2m - vm) / 3.0;  // leading alias term is O(M^-2)
}

void CorrelationKernel::consistency_check(const VectorI& x) const {
  const Complex a = extrapolated_entry(x);
  const Complex vm2 = quadrature_entry(x, 2 * grid_m_);
  const Complex vm4 = quadrature_entry(x, 4 * grid_m_);
  const Complex b = (4.0 * vm4 - vm2) / 3.0;
  const Real diff = std::abs(a - b);
  if (diff > opts_.check_tolerance) {
    std::ostringstream ss;
    ss << "quadrature did not converge at offset (";
    for (Index i = 0; i < x.size(); ++i) ss << (i ? "," : "") << x[i];
    ss << "): M->2M Richardson difference " << diff << " exceeds tolerance "
       << opts_.check_tolerance << " (achieved estimate " << b.real();
    if (std::abs(b.imag()) > 0) ss << (b.imag() < 0 ? "" : "+") << b.imag() << "i";
    ss << ")";
    throw numeric_error(ss.str());
  }
}

void CorrelationKernel::fill_offset_box(int extent) const {
  // Batched evaluation of every offset in [-extent, extent]^d from sampled
  // theta via per-axis partial Fourier sums; Richardson over (M, 2M).
  const int d = sea_.dimension();
  const int X = extent;
  const int nx = 2 * X + 1;

  auto transform = [&](int M) -> std::vector<Complex> {
    const std::vector<signed char> s = sample_symbol(sea_, M);
    const Real h = kTwoPi / M;
    // phase[j][t] = e^{i k_j (t - X)}
    auto phases = [&](int j) {
      std::vector<Complex> row(nx);
      const Real kj = -kPi + (j + 0.5) * h;
      const Complex step = std::polar(1.0, kj);
      Complex cur = std::polar(1.0, -kj * X);
      for (int t = 0; t < nx; ++t) {
        row[t] = cur;
        cur *= step;
      }
      return row;
    };
    // Cascade axis by axis: data starts as s over M^d, ends as sums over nx^d.
    std::size_t lead = 1;  // product of transformed (nx) dims
    std::size_t trail = 1;
    for (int i = 1; i < d; ++i) trail *= static_cast<std::size_t>(M);
    std::vector<Complex> cur(s.size());
    for (std::size_t t = 0; t < s.size(); ++t)
      cur[t] = Complex(static_cast<Real>(s[t]), 0.0);
    for (int axis = 0; axis < d; ++axis) {
      // cur has shape [lead, M, trail]; produce [lead, trail, nx] then
      // treat as lead' = lead * nx ... easier: produce [nx, lead, trail]
      // reordering is avoided by writing output shaped [lead, nx, trail].
      std::vector<Complex> next(lead * nx * trail, Complex(0.0, 0.0));
      for (int j = 0; j < M; ++j) {
        const std::vector<Complex> ph = phases(j);
        for (std::size_t a = 0; a < lead; ++a) {
          const Complex* src = cur.data() + (a * M + j) * trail;
          for (int t = 0; t < nx; ++t) {
            Complex* dst = next.data() + (a * nx + t) * trail;
            const Complex p = ph[t];
            for (std::size_t b = 0; b < trail; ++b) dst[b] += p * src[b];
          }
        }
      }
      cur = std::move(next);
      lead *= nx;
      trail /= (axis + 1 < d) ? static_cast<std::size_t>(M) : 1;
    }
    const Real norm = std::pow(static_cast<Real>(M), d);
    for (auto& v : cur) v /= norm;
    return cur;  // shape [nx]^d, index (x_i + X), axis 0 slowest
  };

  const std::vector<Complex> vm = transform(grid_m_);
  const std::vector<Complex> v2m = transform(2 * grid_m_);

  std::vector<int> idx(d, 0);
  VectorI x(d);
  std::size_t t = 0;
  std::unique_lock lock(mutex_);
  for (;;) {
    for (int i = 0; i < d; ++i) x[i] = idx[i] - X;
    cache_[to_offset(x)] = (4.0 * v2m[t] - vm[t]) / 3.0;
    ++t;
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == nx) idx[axis--] = 0;
    if (axis < 0) break;
  }
  box_extent_ = extent;
}

Complex CorrelationKernel::cached_or_compute(const VectorI& x) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(to_offset(x));
    if (it != cache_.end()) return it->second;
  }
  if (mode_ == EvalMode::fft_grid) {
    const int need = linf(x);
    {
      std::shared_lock lock(mutex_);
      if (box_extent_ >= need) {
        auto it = cache_.find(to_offset(x));
        if (it != cache_.end()) return it->second;
      }
    }
    fill_offset_box(std::max(need, std::min(2 * std::max(box_extent_, 4),
                                            grid_m_ / 2)));
    std::shared_lock lock(mutex_);
    return cache_.at(to_offset(x));
  }
  const Complex v = extrapolated_entry(x);
  std::unique_lock lock(mutex_);
  cache_[to_offset(x)] = v;
  return v;
}

Complex CorrelationKernel::gamma_entry(const VectorI& x) const {
  if (x.size() != sea_.dimension())
    throw domain_error("gamma_entry: offset has wrong dimension");
  const int n = linf(x);
  if (n > opts_.max_offset)
    throw domain_error("gamma_entry: offset exceeds configured maximum " +
                       std::to_string(opts_.max_offset));
  if (mode_ == EvalMode::analytic) return analytic_entry(x);
  if (mode_ == EvalMode::fft_grid && 2 * n > grid_m_)
    throw domain_error(
        "gamma_entry: offset exceeds half the grid size; raise grid_points");
  bool need_check = false;
  {
    std::shared_lock lock(mutex_);
    need_check = n > checked_linf_;
  }
  const Complex v = cached_or_compute(x);
  if (need_check) {
    consistency_check(x);
    std::unique_lock lock(mutex_);
    checked_linf_ = std::max(checked_linf_, n);
  }
  return v;
}

void CorrelationKernel::warm(const Region& region) const {
  if (mode_ == EvalMode::analytic) return;
  int extent = 0;
  for (const auto& a : region.sites())
    for (const auto& b : region.sites())
      extent = std::max(extent, linf(a - b));
  if (mode_ == EvalMode::fft_grid) {
    bool have = false;
    {
      std::shared_lock lock(mutex_);
      have = box_extent_ >= extent;
    }
    if (!have) fill_offset_box(extent);
  }
  // Trigger the one-time consistency check at the largest offset.
  VectorI corner = region.sites().back() - region.sites().front();
  gamma_entry(corner);
}

Region::Region(int d, std::vector<VectorI> sites, bool cube_flag, int edge)
    : d_(d), sites_(std::move(sites)), is_cube_(cube_flag), edge_(edge) {
  if (sites_.empty()) throw config_error("region needs at least one site");
}

Region Region::cube(int dimension, int edge) {
  if (dimension < 1 || edge < 1)
    throw config_error("cube region needs dimension >= 1 and edge >= 1");
  std::vector<VectorI> sites;
  sites.reserve(static_cast<std::size_t>(std::pow(edge, dimension)));
  VectorI x = VectorI::Zero(dimension);
  for (;;) {
    sites.push_back(x);
    int axis = dimension - 1;
    while (axis >= 0 && ++x[axis] == edge) x[axis--] = 0;
    if (axis < 0) break;
  }
  return Region(dimension, std::move(sites), true, edge);
}

Region Region::voxels(int dimension, std::vector<VectorI> sites) {
  if (sites.empty()) throw config_error("voxel region needs at least one site");
  std::vector<Offset> keys;
  int edge = 1;
  for (const auto& s : sites) {
    if (s.size() != dimension)
      throw config_error("voxel site has wrong dimension");
    keys.push_back(to_offset(s));
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw config_error("voxel region has duplicate sites");
  for (int i = 0; i < dimension; ++i) {
    int lo = sites[0][i], hi = sites[0][i];
    for (const auto& s : sites) {
      lo = std::min(lo, s[i]);
      hi = std::max(hi, s[i]);
    }
    edge = std::max(edge, hi - lo + 1);
  }
  return Region(dimension, std::move(sites), false, edge);
}

Region Region::ball(int dimension, int edge) {
  Region cube_region = Region::cube(dimension, edge);
  const Real c = 0.5 * (edge - 1);
  const Real r = 0.5 * (edge - 1) + 1e-9;
  std::vector<VectorI> sites;
  for (const auto& s : cube_region.sites()) {
    Real d2 = 0.0;
    for (int i = 0; i < dimension; ++i) d2 += (s[i] - c) * (s[i] - c);
    if (d2 <= r * r) sites.push_back(s);
  }
  Region reg = Region::voxels(dimension, std::move(sites));
  return reg;
}

RegionMatrix build_region_matrix(const CorrelationKernel& kernel,
                                 const Region& region, Index site_cap) {
  if (region.dimension() != kernel.sea().dimension())
    throw config_error("region and sea dimensions differ");
  const Index n = region.site_count();
  if (n > site_cap)
    throw domain_error("region has " + std::to_string(n) +
                       " sites, exceeding the cap of " +
                       std::to_string(site_cap));
  kernel.warm(region);
  // One kernel call per distinct offset, then assembly.
  std::unordered_map<Offset, Complex, OffsetHash> local;
  const auto& sites = region.sites();
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      const VectorI off = sites[a] - sites[b];
      local.emplace(to_offset(off), Complex(0, 0));
    }
  }
  for (auto& [key, value] : local) {
    VectorI off(region.dimension());
    for (int i = 0; i < region.dimension(); ++i) off[i] = key[i];
    value = kernel.gamma_entry(off);
  }
  MatrixC g(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      const Complex v = local.at(to_offset(VectorI(sites[a] - sites[b])));
      g(a, b) = v;
      g(b, a) = std::conj(v);
    }
  }
  // Diagonal of a Hermitian matrix is real by construction here (gamma_0).
  return RegionMatrix{region, std::move(g)};
}

Real hermiticity_residue(const MatrixC& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace fermsea
