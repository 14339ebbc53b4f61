#pragma once

#include <vector>

#include "fermsea/model.hpp"

namespace fermsea {

/// Open spin-1/2 chain
///   H = sum_j h0 sz_j + h1 (sx_j sx_{j+1} + sy_j sy_{j+1})
///             + h2 (sx_j sy_{j+1} - sy_j sx_{j+1}).
struct SpinChainSpec {
  int N;  ///< sites, 2 <= N <= 14
  Real h0 = 0.0, h1 = 0.0, h2 = 0.0;
};

struct JwCouplings {
  Real h0, h1, h2;
};

/// Couplings of the spin image of the 1-D nearest-neighbor chain
///   H = sum_j T0 n_j + (T1 c^dag_{j+1} c_j + h.c.):
/// (h0, h1, h2) = (T0/2, Re T1 / 2, Im T1 / 2). Convention:
/// c_j = [prod_{i<j} (-sz_i)] sigma^-_j with occupation n = (1 + sz)/2; the
/// constant N T0 / 2 is dropped. Validated end to end by the spectrum and
/// entropy equivalence tests.
JwCouplings couplings_from_hopping(Real T0, Complex T1);

/// Same, reading T0 (including the chemical potential) and T1 from a 1-D
/// nearest-neighbor hopping model; longer range is a capability error.
JwCouplings couplings_from_hopping(const HoppingModel& model);

/// Reduced state of the first `block` sites of a 2^N pure state.
struct DensityMatrix {
  MatrixC rho;  ///< Hermitian, PSD, unit trace (validated)
};
DensityMatrix reduced_density_matrix(const VectorC& state, int N, int block);
Real density_matrix_entropy(const DensityMatrix& rho, Real base = 2.0);

/// Ground state of the spin chain by magnetization-sector diagonalization,
/// then the von Neumann entropy of the first `block` sites. A degenerate
/// ground space whose members disagree on the block entropy raises an
/// ambiguity error.
Real spin_ground_entropy(const SpinChainSpec& spec, int block, Real base = 2.0);

/// All 2^N eigenvalues, ascending (test oracle; N <= 12).
std::vector<Real> spin_full_spectrum(const SpinChainSpec& spec);

/// Single-particle matrix of the open chain: T0 on the diagonal,
/// T1 at (j+1, j).
MatrixC open_chain_single_particle(int N, Real T0, Complex T1);

/// Fills the `filled` lowest modes of the Hermitian single-particle matrix T,
/// builds the block correlation matrix and returns sum_j h(lambda_j).
/// A Fermi-level tie within 1e-12 raises an ambiguity error. N <= 2000.
Real fermion_chain_entropy(const MatrixC& T, int filled, int block,
                           Real base = 2.0);

/// All 2^N many-body energies sum_{occupied} eps_nu, ascending (N <= 20).
std::vector<Real> fermion_many_body_spectrum(const MatrixC& T);

}  // namespace fermsea
