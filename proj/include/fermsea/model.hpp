#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "fermsea/errors.hpp"
#include "fermsea/types.hpp"

namespace fermsea {

/// Finite-support hopping amplitudes T_alpha on Z^d plus a chemical
/// potential. Hermiticity T_{-alpha} = conj(T_alpha) is validated on
/// construction so the dispersion is real.
class HoppingModel {
 public:
  HoppingModel(int dimension, std::map<Offset, Complex> hoppings,
               Real chemical_potential = 0.0);

  /// Nearest-neighbor model: amplitude t on every +-e_i, on-site t0.
  static HoppingModel nearest_neighbor(int dimension, Complex t, Real t0 = 0.0,
                                       Real chemical_potential = 0.0);

  int dimension() const { return d_; }
  Real chemical_potential() const { return mu_; }
  const std::map<Offset, Complex>& hoppings() const { return hoppings_; }
  /// Max |alpha_i| over the support.
  int range() const { return range_; }
  /// Sum of |T_alpha| + |mu|; sets the scale for tie detection.
  Real amplitude_scale() const { return scale_; }

 private:
  int d_;
  std::map<Offset, Complex> hoppings_;
  Real mu_;
  int range_ = 0;
  Real scale_ = 0.0;
};

/// epsilon(k) = sum_alpha T_alpha exp(-i k.alpha) + mu. Real by Hermiticity;
/// an imaginary residue above 1e-12 (relative to the amplitude scale) is an
/// error.
Real dispersion_at(const HoppingModel& model, const VectorR& k);

struct DispersionSea {
  HoppingModel model;
};
struct IntervalProductSea {
  VectorR half_widths;  // per-axis k_F in [0, pi]
  VectorR centers;
};
struct BallUnionSea {
  std::vector<std::pair<VectorR, Real>> balls;  // (center, radius)
};
struct CheckerboardSea {
  int m;  // cell edge l = pi/m, d = 2
};
struct GridIndicatorSea {
  int resolution;                 // cells per axis, cell-centered samples
  std::vector<std::uint8_t> cells;  // row-major (axis 0 slowest), values 0/1
};

using SeaVariant = std::variant<DispersionSea, IntervalProductSea, BallUnionSea,
                                CheckerboardSea, GridIndicatorSea>;

/// Indicator theta(k) of the occupied part of the Brillouin zone. Immutable;
/// all queries are pure. `complemented` flips theta -> 1 - theta.
class FermiSea {
 public:
  static FermiSea from_dispersion(HoppingModel model);
  static FermiSea interval_product(VectorR half_widths, VectorR centers);
  static FermiSea interval_product(int dimension, Real half_width);
  static FermiSea ball_union(int dimension,
                             std::vector<std::pair<VectorR, Real>> balls);
  static FermiSea checkerboard(int m);
  static FermiSea grid(int dimension, int resolution,
                       std::vector<std::uint8_t> cells);
  static FermiSea empty(int dimension);
  static FermiSea full(int dimension);

  FermiSea complement() const;

  int dimension() const { return d_; }
  bool complemented() const { return complement_; }
  const SeaVariant& variant() const { return variant_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&variant_);
  }

 private:
  FermiSea(int d, SeaVariant v) : d_(d), variant_(std::move(v)) {}
  int d_;
  bool complement_ = false;
  SeaVariant variant_;
};

/// theta(k) in {0,1}; k is wrapped into [-pi,pi)^d. For dispersion seas,
/// occupied means epsilon(k) < 0 strictly (exact ties count as unoccupied).
int indicator(const FermiSea& sea, const VectorR& k);

/// Quadrature-facing occupation in {0, 1/2, 1}: identical to indicator()
/// except that dispersion nodes within tie tolerance of epsilon = 0 get
/// weight 1/2, so midpoint sums are insensitive to the tie convention.
Real occupation_weight(const FermiSea& sea, const VectorR& k);

/// Occupied volume fraction in [0,1]. Closed form for interval / ball /
/// checkerboard seas, cell counting for grids, midpoint quadrature for
/// dispersion seas.
Real filling(const FermiSea& sea);

/// Default midpoint grid size per axis for dispersion-sea integrals.
int filling_grid_default(int dimension);

}  // namespace fermsea
