#pragma once

#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "fermsea/model.hpp"

namespace fermsea {

enum class EvalMode { automatic, analytic, quadrature, fft_grid };

struct QuadratureOptions {
  int grid_points = 0;        ///< midpoint nodes per axis; 0 = dimension default
  Real check_tolerance = 1e-7;  ///< Richardson M->2M consistency tolerance
  int max_offset = 65536;       ///< per-axis |x_i| cap
};

/// Dimension default for the per-axis midpoint rule: 4096 (d=1),
/// 1024 (d=2), 256 (d=3). For seas that are piecewise constant on a known
/// sub-lattice (checkerboard, grid) the default is snapped down so the
/// sampling is exact.
int quadrature_grid_default(const FermiSea& sea);

/// Toeplitz generator x -> gamma_x of the correlation matrix,
///   gamma_x = (2pi)^-d  integral dk [1 - 2 theta(k)] e^{i k.x},
/// evaluated in closed form for interval-product seas and by midpoint
/// quadrature (per entry, or batched over an offset box) otherwise.
/// Quadrature values are Richardson-extrapolated from the M and 2M grids;
/// a one-time M->2M consistency check runs at the largest requested offset.
/// Entries are cached; reads are concurrent, insertion is exclusive.
class CorrelationKernel {
 public:
  explicit CorrelationKernel(FermiSea sea, EvalMode mode = EvalMode::automatic,
                             QuadratureOptions opts = {});

  const FermiSea& sea() const { return sea_; }
  EvalMode mode() const { return mode_; }  ///< resolved mode, never automatic
  const QuadratureOptions& options() const { return opts_; }
  int grid_points() const { return grid_m_; }

  Complex gamma_entry(const VectorI& offset) const;

  /// Precomputes every offset needed for the region (batched for grid mode).
  void warm(const class Region& region) const;

 private:
  Complex analytic_entry(const VectorI& offset) const;
  Complex quadrature_entry(const VectorI& offset, int M) const;
  Complex extrapolated_entry(const VectorI& offset) const;
  void fill_offset_box(int extent) const;
  void consistency_check(const VectorI& offset) const;
  Complex cached_or_compute(const VectorI& offset) const;

  FermiSea sea_;
  EvalMode mode_;
  QuadratureOptions opts_;
  int grid_m_;

  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Offset, Complex, OffsetHash> cache_;
  mutable int box_extent_ = -1;   // fft_grid: cached offsets cover [-e, e]^d
  mutable int checked_linf_ = 0;  // largest offset norm validated so far
};

/// Finite lattice region: a cube of edge L anchored at the origin, or an
/// explicit voxel list.
class Region {
 public:
  static Region cube(int dimension, int edge);
  static Region voxels(int dimension, std::vector<VectorI> sites);
  /// Voxel ball inscribed in the cube [0, L)^d (used for non-cubic sweeps).
  static Region ball(int dimension, int edge);

  int dimension() const { return d_; }
  Index site_count() const { return static_cast<Index>(sites_.size()); }
  const std::vector<VectorI>& sites() const { return sites_; }
  bool is_cube() const { return is_cube_; }
  /// Edge for cubes; bounding-box edge for voxel lists (schedule parameter).
  int bounding_edge() const { return edge_; }

 private:
  Region(int d, std::vector<VectorI> sites, bool cube_flag, int edge);
  int d_;
  std::vector<VectorI> sites_;
  bool is_cube_;
  int edge_;
};

/// Hermitian n x n matrix with entries gamma_{site_a - site_b}.
struct RegionMatrix {
  Region region;
  MatrixC entries;
  Index size() const { return entries.rows(); }
};

RegionMatrix build_region_matrix(const CorrelationKernel& kernel,
                                 const Region& region,
                                 Index site_cap = 20000);

Real hermiticity_residue(const MatrixC& m);

}  // namespace fermsea
