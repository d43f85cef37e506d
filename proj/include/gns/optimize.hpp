#pragma once

#include <string>
#include <vector>

#include "gns/partition.hpp"
#include "gns/rng.hpp"
#include "gns/stability.hpp"

namespace gns {

/// Parametric family of sector partitions: base breakpoints plus bounded
/// per-breakpoint offsets.
struct PerturbationFamily {
  ConicalPartition base;
  double bound = 0.5;  // max |offset| per breakpoint, radians

  int free_parameters() const { return base.cells(); }
  /// Partition at the given offsets (clamped to the bound).
  ConicalPartition at(const Vec& offsets) const;

  static PerturbationFamily around_regular(int k, double bound);
};

/// Maximizes psi_0 over sector partitions with k breakpoints by multi-start
/// coordinate ascent.  force_empty_cell pins one cell to zero width.
struct SupPsiZeroResult {
  double value = 0.0;
  ConicalPartition partition;
  int restarts = 0;
};
SupPsiZeroResult sup_psi_zero_search(int k, int n, int restarts, RandomSource& rng,
                                     bool force_empty_cell = false);

struct VariationGridSpec {
  double r_max = 3.0;
  int radial = 24;
  int angular = 48;
  double margin = 1e-2;    // distance kept from cell boundaries
  double tolerance = 1e-6;
};

struct VariationViolation {
  Vec x;
  int claimed = 0;
  int better = 0;
  double gap = 0.0;
};

/// Pointwise check of the first-variation containment: on every margin-interior
/// grid point of cell A_i, L T_rho 1_{A_i}(x) must dominate every
/// L T_rho 1_{A_j}(x) up to the tolerance.
struct VariationReport {
  double rho = 0.0;
  std::vector<Vec> points;
  std::vector<int> claimed;
  std::vector<std::vector<double>> values;  // values[point][cell], rho^{-1} L T_rho
  std::vector<VariationViolation> violations;
  long checked = 0;
  std::string to_json() const;
};
VariationReport first_variation_check(const ConicalPartition& p, double rho,
                                      const VariationGridSpec& spec);

/// Multi-start random + coordinate-ascent search maximizing psi_rho over the
/// family.  Restart 0 starts from the base point.
struct PerturbationSearchResult {
  double best_value = 0.0;
  Vec best_offsets;
  ConicalPartition best_partition;
  double base_value = 0.0;
  double max_visited = 0.0;
  long evaluations = 0;
  int degree = 0;
};
PerturbationSearchResult perturbation_search_psi(double rho, const PerturbationFamily& family,
                                                 int restarts, RandomSource& rng);

/// Smallest series degree whose psi tail bound is below tol.
int psi_degree_for_tail(int k, double rho, double tol);

struct WitnessScanSpec {
  int along = 10;          // points along the cell generator direction
  int across = 12;         // points across, in the adjacent-cell direction
  double across_max = 3.0;
  double along_scaled_min = 1.5;  // |rho| * <x,y> range
  double along_scaled_max = 6.0;
  double near_radius_max = 3.0;   // additional near-origin sweep
  int near_radial = 6;
  int near_angular = 16;
};

/// Search for a point witnessing that the regular partition fails to maximize
/// psi_rho at negative rho: x in cell i with rho^{-1} L T_rho (1_i - 1_j)(x)
/// certified negative (magnitude above 5x the evaluation error, floored at
/// 1e-9).  The same scan at positive rho is expected to certify nothing.
struct Witness {
  bool found = false;
  double rho = 0.0;
  Vec x;
  int cell_i = 0;
  int cell_j = 0;
  double value = 0.0;
  double error_estimate = 0.0;
  double improvement = 0.0;  // psi gain rate per unit of transported measure
  long scanned = 0;
  double scan_radius_max = 0.0;
  std::string to_json() const;
};
Witness negative_rho_witness(double rho, const WitnessScanSpec& spec = {});

/// For each epsilon, finds sector partitions whose psi_0 deficit is exactly
/// epsilon (along random width directions) and records the largest d2 to the
/// regular partition, asserting the 6 eps^{1/8} stability bound.
struct StabilityProbeRow {
  double epsilon = 0.0;
  double max_d2 = 0.0;
  double bound = 0.0;
  bool pass = false;
};
std::vector<StabilityProbeRow> psi0_stability_probe(const std::vector<double>& epsilons,
                                                    RandomSource& rng, int directions = 24);

}  // namespace gns
