#pragma once

#include <string>
#include <vector>

#include "gns/partition.hpp"
#include "gns/rng.hpp"
#include "gns/stability.hpp"

namespace gns {

/// Symmetric nonnegative edge weights, zero diagonal.  Cut values follow the
/// ordered-pair double sum, so each unordered edge counts twice.
class WeightedGraph {
 public:
  explicit WeightedGraph(int vertices);
  WeightedGraph(int vertices, std::vector<Vec> weights);

  int vertices() const { return n_; }
  double weight(int i, int j) const { return w_[i][j]; }
  void set_weight(int i, int j, double w);

  double cut_value(const std::vector<int>& assignment) const;
  double total_weight() const;  // sum over ordered pairs

  /// Whitespace edge list "u v w" (0-indexed, one edge per line).
  static WeightedGraph from_edge_list(const std::string& text, int vertices);
  std::string to_json() const;
  static WeightedGraph from_json(const std::string& text);

  static WeightedGraph random(int vertices, double edge_probability, RandomSource& rng);

 private:
  int n_;
  std::vector<Vec> w_;
};

/// Unit vectors labelling the graph vertices.
struct Embedding {
  std::vector<Vec> vectors;
  double objective = 0.0;      // sum_{i != j} a_ij (1 - <v_i, v_j>)
  double penalty = 0.0;        // residual of the <v_i,v_j> >= -1/(k-1) constraint
  double gradient_norm = 0.0;  // final projected-gradient norm
  bool converged = false;
};

/// The stability-deficit ratio of the regular partition on a rho grid with
/// the grid infimum and a locally refined argmin.
struct AlphaResult {
  int k = 0;
  Vec rho_grid;
  Vec ratios;
  double infimum = 0.0;
  double argmin_rho = 0.0;
  std::string to_json() const;
};

struct AlphaOptions {
  int radial = 64;
  int angular = 48;
};

/// ratio(rho) = (k - k^2 J(regular, rho)) / ((k-1)(1-rho)) evaluated on a
/// grid inside [-1/(k-1), 0], with golden-section refinement of the infimum.
AlphaResult alpha_k(int k, const Vec& rho_grid, const AlphaOptions& opts = {});

/// Exact optimum by enumeration; throws when k^n exceeds the cap.
std::pair<double, std::vector<int>> maxkcut_bruteforce(const WeightedGraph& g, int k,
                                                       long cap = 10000000);

/// Penalized projected gradient ascent over unit vectors: maximizes
/// sum a_ij (1 - <v_i,v_j>) with an increasing quadratic penalty on
/// <v_i,v_j> < -1/(k-1).  A rounding heuristic, not a certified solver.
Embedding relax_embed(const WeightedGraph& g, int k, int d, int iterations,
                      RandomSource& rng);

/// Rounds an embedding through uniformly random rotations of the regular
/// simplicial conical partition; returns the best of `trials` cuts.
std::pair<std::vector<int>, double> round_conical(const WeightedGraph& g,
                                                  const Embedding& e, int k,
                                                  RandomSource& rng, int trials);

}  // namespace gns
