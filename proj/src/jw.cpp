#include "fermsea/jw.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "fermsea/entropy.hpp"

namespace fermsea {

namespace {

void check_spec(const SpinChainSpec& spec) {
  if (spec.N < 2 || spec.N > 14)
    throw domain_error("spin chain supports 2 <= N <= 14");
}

/// Basis states of the magnetization sector with `m` up spins, ascending.
std::vector<std::uint32_t> sector_states(int N, int m) {
  std::vector<std::uint32_t> states;
  const std::uint32_t top = 1u << N;
  for (std::uint32_t s = 0; s < top; ++s)
    if (std::popcount(s) == m) states.push_back(s);
  return states;
}

/// Dense sector Hamiltonian. Bit j set means sz_j = +1 (site occupied).
/// Bonds: h1 (sx sx + sy sy) + h2 (sx sy - sy sx) hops an up spin between
/// neighbors with amplitude 2 h1 + 2 i h2 for |.. 0_j 1_{j+1} ..> ->
/// |.. 1_j 0_{j+1} ..>.
MatrixC sector_hamiltonian(const SpinChainSpec& spec,
                           const std::vector<std::uint32_t>& states,
                           const std::vector<std::int32_t>& lookup) {
  const int N = spec.N;
  const Index dim = static_cast<Index>(states.size());
  MatrixC H = MatrixC::Zero(dim, dim);
  const Complex hop(2.0 * spec.h1, 2.0 * spec.h2);
  for (Index a = 0; a < dim; ++a) {
    const std::uint32_t s = states[static_cast<std::size_t>(a)];
    H(a, a) = spec.h0 * (2.0 * std::popcount(s) - N);
    for (int j = 0; j + 1 < N; ++j) {
      const std::uint32_t bj = 1u << j;
      const std::uint32_t bj1 = 1u << (j + 1);
      if ((s & bj1) && !(s & bj)) {  // 0_j 1_{j+1} -> 1_j 0_{j+1}
        const std::uint32_t t = (s ^ bj1) | bj;
        const Index b = lookup[t];
        H(b, a) += hop;
        H(a, b) += std::conj(hop);
      }
    }
  }
  return H;
}

struct GroundCandidate {
  Real energy;
  VectorC state_full;  // embedded in the 2^N basis
};

/// All ground states (within 1e-10 of the global minimum) across sectors.
std::vector<GroundCandidate> ground_states(const SpinChainSpec& spec) {
  check_spec(spec);
  const int N = spec.N;
  std::vector<std::int32_t> lookup(1u << N, -1);
  Real best = std::numeric_limits<Real>::max();
  struct SectorResult {
    std::vector<std::uint32_t> states;
    VectorR energies;
    MatrixC vectors;
  };
  std::vector<SectorResult> sectors;
  for (int m = 0; m <= N; ++m) {
    SectorResult sr;
    sr.states = sector_states(N, m);
    for (std::size_t i = 0; i < sr.states.size(); ++i)
      lookup[sr.states[i]] = static_cast<std::int32_t>(i);
    const MatrixC H = sector_hamiltonian(spec, sr.states, lookup);
    Eigen::SelfAdjointEigenSolver<MatrixC> solver(H);
    if (solver.info() != Eigen::Success)
      throw numeric_error("sector eigensolver failed");
    sr.energies = solver.eigenvalues();
    sr.vectors = solver.eigenvectors();
    best = std::min(best, sr.energies[0]);
    sectors.push_back(std::move(sr));
  }
  std::vector<GroundCandidate> out;
  for (const auto& sr : sectors) {
    for (Index i = 0; i < sr.energies.size() && sr.energies[i] <= best + 1e-10;
         ++i) {
      VectorC full = VectorC::Zero(1 << N);
      for (std::size_t a = 0; a < sr.states.size(); ++a)
        full[sr.states[a]] = sr.vectors(static_cast<Index>(a), i);
      out.push_back({sr.energies[i], std::move(full)});
    }
  }
  return out;
}

}  // namespace

JwCouplings couplings_from_hopping(Real T0, Complex T1) {
  return JwCouplings{0.5 * T0, 0.5 * T1.real(), 0.5 * T1.imag()};
}

JwCouplings couplings_from_hopping(const HoppingModel& model) {
  if (model.dimension() != 1)
    throw capability_error("Jordan-Wigner mapping is 1-D only");
  if (model.range() > 1)
    throw capability_error(
        "Jordan-Wigner couplings implemented for nearest-neighbor hopping "
        "only (longer range needs sigma^z strings)");
  Complex T1(0.0, 0.0);
  Real T0 = model.chemical_potential();
  for (const auto& [off, amp] : model.hoppings()) {
    if (off[0] == 0) T0 += amp.real();
    if (off[0] == 1) T1 = amp;
  }
  return couplings_from_hopping(T0, T1);
}

DensityMatrix reduced_density_matrix(const VectorC& state, int N, int block) {
  if (N < 1 || N > 20) throw domain_error("reduced_density_matrix: bad N");
  if (state.size() != (Index{1} << N))
    throw domain_error("state vector must have dimension 2^N");
  if (block < 1 || block > N)
    throw domain_error("block must lie in [1, N]");
  const Index da = Index{1} << block;
  const Index db = Index{1} << (N - block);
  // Site j <-> bit j; block bits are the low ones.
  MatrixC psi(da, db);
  for (Index b = 0; b < db; ++b)
    for (Index a = 0; a < da; ++a) psi(a, b) = state[(b << block) | a];
  DensityMatrix dm{psi * psi.adjoint()};
  const Real trace = dm.rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-12)
    throw numeric_error("reduced density matrix trace deviates from 1 by " +
                        std::to_string(trace - 1.0));
  return dm;
}

Real density_matrix_entropy(const DensityMatrix& dm, Real base) {
  Eigen::SelfAdjointEigenSolver<MatrixC> solver(dm.rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw numeric_error("density matrix eigensolver failed");
  Real S = 0.0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const Real p = solver.eigenvalues()[i];
    if (p < -1e-12)
      throw numeric_error("density matrix has negative eigenvalue " +
                          std::to_string(p));
    if (p > 0.0) S -= p * std::log(p);
  }
  return S / std::log(base);
}

Real spin_ground_entropy(const SpinChainSpec& spec, int block, Real base) {
  check_spec(spec);
  if (block < 1 || block > spec.N / 2 + 1)
    throw domain_error("block must lie in [1, N/2 + 1]");
  const std::vector<GroundCandidate> ground = ground_states(spec);
  Real S_first = 0.0;
  bool first = true;
  Real S_min = 0.0, S_max = 0.0;
  for (const auto& g : ground) {
    const Real S =
        density_matrix_entropy(reduced_density_matrix(g.state_full, spec.N, block), base);
    if (first) {
      S_first = S_min = S_max = S;
      first = false;
    } else {
      S_min = std::min(S_min, S);
      S_max = std::max(S_max, S);
    }
  }
  if (S_max - S_min > 1e-9)
    throw ambiguity_error(
        "degenerate ground space with unequal block entropies (spread " +
        std::to_string(S_max - S_min) + ")");
  return S_first;
}

std::vector<Real> spin_full_spectrum(const SpinChainSpec& spec) {
  check_spec(spec);
  if (spec.N > 12)
    throw domain_error("spin_full_spectrum supports N <= 12");
  const int N = spec.N;
  std::vector<std::int32_t> lookup(1u << N, -1);
  std::vector<Real> all;
  for (int m = 0; m <= N; ++m) {
    const std::vector<std::uint32_t> states = sector_states(N, m);
    for (std::size_t i = 0; i < states.size(); ++i)
      lookup[states[i]] = static_cast<std::int32_t>(i);
    const MatrixC H = sector_hamiltonian(spec, states, lookup);
    Eigen::SelfAdjointEigenSolver<MatrixC> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw numeric_error("sector eigensolver failed");
    for (Index i = 0; i < solver.eigenvalues().size(); ++i)
      all.push_back(solver.eigenvalues()[i]);
  }
  std::sort(all.begin(), all.end());
  return all;
}

MatrixC open_chain_single_particle(int N, Real T0, Complex T1) {
  if (N < 1) throw domain_error("chain length must be >= 1");
  MatrixC T = MatrixC::Zero(N, N);
  for (int j = 0; j < N; ++j) T(j, j) = T0;
  for (int j = 0; j + 1 < N; ++j) {
    T(j + 1, j) = T1;
    T(j, j + 1) = std::conj(T1);
  }
  return T;
}

Real fermion_chain_entropy(const MatrixC& T, int filled, int block, Real base) {
  const Index N = T.rows();
  if (N < 1 || N > 2000)
    throw domain_error("fermion_chain_entropy supports 1 <= N <= 2000");
  if (T.cols() != N || hermiticity_residue(T) > 1e-12 * std::max(1.0, T.norm()))
    throw domain_error("single-particle matrix must be Hermitian");
  if (filled < 0 || filled > N)
    throw domain_error("filling count must lie in [0, N]");
  if (block < 1 || block > N) throw domain_error("block must lie in [1, N]");
  Eigen::SelfAdjointEigenSolver<MatrixC> solver(T);
  if (solver.info() != Eigen::Success)
    throw numeric_error("single-particle eigensolver failed");
  if (filled > 0 && filled < N) {
    const Real gap =
        solver.eigenvalues()[filled] - solver.eigenvalues()[filled - 1];
    if (gap <= 1e-12)
      throw ambiguity_error(
          "degenerate single-particle mode at the Fermi level (gap " +
          std::to_string(gap) + "); the filled set is ambiguous");
  }
  // gamma~_{ab} = delta_{ab} - 2 sum_{occupied} conj(phi(a)) phi(b)
  const MatrixC occ = solver.eigenvectors().leftCols(filled);
  MatrixC g = MatrixC::Identity(block, block) -
              2.0 * (occ.topRows(block).conjugate() *
                     occ.topRows(block).transpose());
  Real S = 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixC> gs(g, Eigen::EigenvaluesOnly);
  if (gs.info() != Eigen::Success)
    throw numeric_error("block correlation eigensolver failed");
  for (Index i = 0; i < gs.eigenvalues().size(); ++i) {
    const Real lam = std::clamp(gs.eigenvalues()[i], -1.0, 1.0);
    S += binary_entropy(lam, base);
  }
  return S;
}

std::vector<Real> fermion_many_body_spectrum(const MatrixC& T) {
  const Index N = T.rows();
  if (N < 1 || N > 20)
    throw domain_error("fermion_many_body_spectrum supports N <= 20");
  Eigen::SelfAdjointEigenSolver<MatrixC> solver(T, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw numeric_error("single-particle eigensolver failed");
  const VectorR eps = solver.eigenvalues();
  std::vector<Real> all;
  all.reserve(std::size_t{1} << N);
  for (std::uint32_t occ = 0; occ < (1u << N); ++occ) {
    Real e = 0.0;
    for (Index nu = 0; nu < N; ++nu)
      if (occ & (1u << nu)) e += eps[nu];
    all.push_back(e);
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace fermsea
