#pragma once

#include <cstdint>
#include <vector>

#include "fermsea/model.hpp"

namespace fermsea {

/// Fejér kernel F_L(x) = (cos(Lx) - 1)/(cos(x) - 1) >= 0, with the removable
/// singularity at x = 0 (mod 2pi) evaluated as L^2 and a series expansion for
/// |x| < 1e-6.
Real fejer(Real x, int L);

/// psi(n) for integer n >= 1 from the harmonic series.
Real digamma_integer(long n);

struct FejerLinearSum {
  Real quadrature;       ///< integral of F_L(x) x over [0, pi]
  Real digamma_formula;  ///< 2 (1 + euler_gamma + ln 2 + psi(L))
};
FejerLinearSum fejer_linear_sum(int L);

struct XiOptions {
  int grid_points = 0;       ///< dispersion seas: midpoint nodes per axis
  Real check_tolerance = 1e-3;  ///< M->2M change triggering an accuracy error
};

/// Xi(q) = integral dk theta(k) [1 - theta(k+q)] with torus wrapping of k+q:
/// the Fermi-sea volume uncovered by a shift q. Closed form for interval,
/// ball (d <= 3) and checkerboard seas, exact cell-overlap sums for grid
/// seas, midpoint quadrature otherwise.
Real xi(const FermiSea& sea, const VectorR& q, const XiOptions& opts = {});

struct XiSample {
  VectorR q;
  Real value;
};
struct XiProfile {
  std::vector<XiSample> samples;
};
XiProfile xi_profile(const FermiSea& sea, const std::vector<VectorR>& qs,
                     const XiOptions& opts = {});

/// (4 / (2pi)^{2d}) * integral dq Xi(q) prod_i F_L(q_i) by tensor-product
/// Gauss-Legendre quadrature on a mesh graded toward q = 0. Identical to
/// tr(1 - gamma~^2) of the Cube(L) region matrix. d <= 3.
Real purity_via_fourier(const FermiSea& sea, int L);

/// Area of the Fermi surface projected onto the hyperplane with normal
/// direction, counting one front per covered/uncovered pair: each d-ball of
/// radius r contributes vol_{d-1}(r); an interval-product box contributes
/// sum_i |q^_i| * (area of the face normal to axis i). Ball and interval
/// seas only.
Real projected_area(const FermiSea& sea, const VectorR& direction);

struct SurfaceProjection {
  Real s_minus = 0.0;
  Real s_plus = 0.0;
  std::vector<std::pair<VectorR, Real>> samples;  ///< (direction, s)
};
SurfaceProjection sample_surface_projection(const FermiSea& sea, int n_dirs,
                                            std::uint64_t seed = 12345);

struct ConeSample {
  VectorR q;
  Real xi_value;
  Real lower;  ///< s_minus * |q|_2 - tol
  Real upper;  ///< s_plus  * |q|_2 + tol
  bool violation;
};
struct ConeReport {
  Real s_minus = 0.0;
  Real s_plus = 0.0;
  bool empirical_slopes = false;  ///< slopes fitted from Xi when no analytic s
  Real tolerance = 0.0;           ///< 1e-3 * (2pi)^d
  std::vector<ConeSample> samples;
  int violations = 0;
};
/// Samples Xi on ||q|| <= eps and compares against the cone bounds
/// s^- ||q|| - tol <= Xi(q) <= s^+ ||q|| + tol. Report-only.
ConeReport cone_check(const FermiSea& sea, Real eps, int n_dirs = 32,
                      int n_radii = 5, std::uint64_t seed = 12345,
                      const XiOptions& opts = {});

}  // namespace fermsea
