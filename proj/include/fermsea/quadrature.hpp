#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fermsea/types.hpp"

namespace fermsea::quad {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr Real kGlNodes[4] = {
    0.18343464249564980, 0.52553240991632899,
    0.79666647741362674, 0.96028985649753623};
inline constexpr Real kGlWeights[4] = {
    0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

struct Mesh {
  std::vector<Real> x;
  std::vector<Real> w;
};

/// Appends the 8 Gauss-Legendre nodes of panel [a, b] to the mesh.
inline void append_panel(Mesh& m, Real a, Real b) {
  const Real mid = 0.5 * (a + b);
  const Real half = 0.5 * (b - a);
  for (int i = 3; i >= 0; --i) {
    m.x.push_back(mid - half * kGlNodes[i]);
    m.w.push_back(half * kGlWeights[i]);
  }
  for (int i = 0; i < 4; ++i) {
    m.x.push_back(mid + half * kGlNodes[i]);
    m.w.push_back(half * kGlWeights[i]);
  }
}

/// Splits [a, b] into n equal panels.
inline void append_panels(Mesh& m, Real a, Real b, int n) {
  for (int i = 0; i < n; ++i)
    append_panel(m, a + (b - a) * i / n, a + (b - a) * (i + 1) / n);
}

/// Mesh for integrals of F_L(x) * smooth(x) over [0, pi]: geometric levels
/// toward the origin where the kernel peaks, panel length at most pi/L so the
/// oscillation is resolved. `refine` multiplies the panel count everywhere.
/// Optional breakpoints (integrand kinks) become panel boundaries.
inline Mesh fejer_half_axis_mesh(int L, int refine = 1,
                                 const std::vector<Real>& breakpoints = {}) {
  std::vector<Real> bounds;
  bounds.push_back(0.0);
  for (int j = 8; j >= 0; --j) bounds.push_back(kPi * std::pow(2.0, -j));
  for (Real b : breakpoints)
    if (b > 1e-12 && b < kPi - 1e-12) bounds.push_back(b);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](Real a, Real b) { return std::abs(a - b) < 1e-12; }),
               bounds.end());
  Mesh m;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const Real a = bounds[i], b = bounds[i + 1];
    int n = std::max(a == 0.0 ? 4 : 2,
                     static_cast<int>(std::ceil(L * (b - a) / kPi)));
    append_panels(m, a, b, n * refine);
  }
  return m;
}

/// Symmetric version over [-pi, pi].
inline Mesh fejer_axis_mesh(int L, int refine = 1,
                            const std::vector<Real>& breakpoints = {}) {
  Mesh half = fejer_half_axis_mesh(L, refine, breakpoints);
  Mesh m;
  const std::size_t n = half.x.size();
  m.x.resize(2 * n);
  m.w.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m.x[n - 1 - i] = -half.x[i];
    m.w[n - 1 - i] = half.w[i];
    m.x[n + i] = half.x[i];
    m.w[n + i] = half.w[i];
  }
  return m;
}

template <class F>
Real integrate(const Mesh& m, F&& f) {
  Real s = 0.0;
  for (std::size_t i = 0; i < m.x.size(); ++i) s += m.w[i] * f(m.x[i]);
  return s;
}

}  // namespace fermsea::quad
