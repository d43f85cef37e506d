#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gns/common.hpp"
#include "gns/rng.hpp"

namespace gns {

enum class PartitionKind { regular, induced, sector2d };

/// One cell of a planar sector decomposition: the angular arc [lo, hi]
/// (hi - lo <= 2pi; hi may exceed 2pi to express wrap-around).
struct SectorCell {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return empty ? 0.0 : hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// k unit vectors with pairwise inner product -1/(k-1), embedded in the
/// first k-1 coordinates of R^n; the first generator is e_1.
std::vector<Vec> regular_simplex_generators(int k, int n);

/// Partition of R^n into k cones: Voronoi regions of generator vectors, or an
/// explicit list of angular breakpoints in the plane.  Immutable value type.
class ConicalPartition {
 public:
  /// Empty placeholder (k = 0); result aggregates overwrite it.
  ConicalPartition() = default;

  static ConicalPartition regular(int k, int n);
  static ConicalPartition from_generators(std::vector<Vec> generators);
  /// Sector partition of R^2; breakpoints strictly increasing in [0, 2pi).
  /// Cell i spans [breakpoints[i], breakpoints[i+1]) (wrapping).
  static ConicalPartition from_breakpoints(Vec breakpoints);

  int dimension() const { return n_; }
  int cells() const { return k_; }
  PartitionKind kind() const { return kind_; }
  const std::vector<Vec>& generators() const { return generators_; }
  const Vec& breakpoints() const { return breakpoints_; }

  /// Smallest index attaining max_j <x, z_j> (ties within 1e-12 resolve to the
  /// smallest index; the tie set has gamma_n measure zero).  For sector
  /// partitions, the cell whose arc contains the angle of x.
  int classify(const Vec& x) const;

  /// True when all cells are planar sectors (possibly times R^{n-2}):
  /// sector2d partitions, and generator partitions whose generators live in
  /// the span of the first two coordinates.
  bool sector_reducible() const;

  /// Arc of each cell; requires sector_reducible().
  std::vector<SectorCell> sector_cells() const;

  /// gamma_n measure of cell i (closed form; requires sector_reducible()).
  double cell_measure(int i) const;

  /// Barycenter vector int_{A_i} x dgamma_n: closed form for sector cells,
  /// magnitude sin(width/2)/sqrt(2pi) along the bisector.
  Vec barycenter(int i) const;

  /// Monte Carlo barycenter for general cones; returns estimate and a
  /// standard-error vector norm.
  std::pair<Vec, double> barycenter_mc(int i, RandomSource& rng, int samples) const;

  /// sum_i ||barycenter(i)||^2.
  double psi_zero() const;

  /// ||z_i - z_j||.
  double barycenter_difference_norm(int i, int j) const;

  /// Copy rotated by `angle` in the plane of the first two coordinates.
  ConicalPartition rotated(double angle) const;

  std::string to_json() const;
  static ConicalPartition from_json(const std::string& text);

 private:
  int n_ = 0;
  int k_ = 0;
  PartitionKind kind_ = PartitionKind::sector2d;
  std::vector<Vec> generators_;
  Vec breakpoints_;
};

/// Near-equal-measure constraint: every cell within [1/k - eps, 1/k + eps].
struct MeasureConstraint {
  int k;
  double epsilon;
  bool satisfied(const ConicalPartition& p) const;
};

struct PartitionDistance {
  double value = 0.0;
  double rotation = 0.0;
  std::vector<int> permutation;
};

/// L2(gamma_n) partition distance: infimum over planar rotations (4096-angle
/// scan plus golden-section refinement) and all k! cell permutations of
/// (sum_i ||1_{A_i} - 1_{sigma C_pi(i)}||^2)^{1/2}.  Exact arc-overlap masses;
/// requires both partitions sector-reducible with equal (n, k).
PartitionDistance d2_distance(const ConicalPartition& p, const ConicalPartition& q);

/// Same metric with overlap masses estimated from `samples` Monte Carlo
/// points (angles sorted once, counted per arc); oracle for the exact path
/// and fallback for general partitions in the plane.
PartitionDistance d2_distance_mc(const ConicalPartition& p, const ConicalPartition& q,
                                 RandomSource& rng, int samples);

}  // namespace gns
