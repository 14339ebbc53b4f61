#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace fermsea {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using VectorR = Eigen::VectorXd;
using VectorC = Eigen::VectorXcd;
using VectorI = Eigen::VectorXi;
using MatrixR = Eigen::MatrixXd;
using MatrixC = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;
inline constexpr Real kTwoPi = 2.0 * kPi;
inline constexpr Real kEulerGamma = 0.577215664901532860606512090082402431;

/// Lattice offset used as a cache key.
using Offset = std::vector<int>;

struct OffsetHash {
  std::size_t operator()(const Offset& o) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : o) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline Offset to_offset(const VectorI& x) {
  return Offset(x.data(), x.data() + x.size());
}

/// Wrap a momentum component into [-pi, pi).
inline Real wrap_pi(Real k) {
  Real w = k - kTwoPi * std::floor((k + kPi) / kTwoPi);
  if (w >= kPi) w -= kTwoPi;   // guards against rounding at the seam
  if (w < -kPi) w += kTwoPi;
  return w;
}

inline VectorR wrap_bz(VectorR k) {
  for (Index i = 0; i < k.size(); ++i) k[i] = wrap_pi(k[i]);
  return k;
}

/// Volume of the d-ball of radius r.
inline Real ball_volume(int d, Real r) {
  if (d == 0) return 1.0;
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(r, d);
}

}  // namespace fermsea
