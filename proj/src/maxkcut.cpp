#include "gns/maxkcut.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace gns {

WeightedGraph::WeightedGraph(int vertices) : n_(vertices), w_(vertices, Vec(vertices, 0.0)) {
  if (vertices < 1) throw std::invalid_argument("WeightedGraph: need vertices >= 1");
}

WeightedGraph::WeightedGraph(int vertices, std::vector<Vec> weights)
    : n_(vertices), w_(std::move(weights)) {
  if (static_cast<int>(w_.size()) != n_) throw std::invalid_argument("weight matrix size");
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(w_[i].size()) != n_) throw std::invalid_argument("weight matrix size");
    if (w_[i][i] != 0.0) throw std::invalid_argument("nonzero diagonal");
    for (int j = 0; j < n_; ++j) {
      if (w_[i][j] < 0.0) throw std::invalid_argument("negative weight");
      if (std::abs(w_[i][j] - w_[j][i]) > 1e-12) throw std::invalid_argument("asymmetric weights");
    }
  }
}

void WeightedGraph::set_weight(int i, int j, double w) {
  if (i == j) throw std::invalid_argument("set_weight: diagonal");
  if (w < 0.0) throw std::invalid_argument("set_weight: negative");
  w_[i][j] = w;
  w_[j][i] = w;
}

double WeightedGraph::cut_value(const std::vector<int>& assignment) const {
  if (static_cast<int>(assignment.size()) != n_)
    throw std::invalid_argument("cut_value: assignment size");
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (assignment[i] != assignment[j]) s += w_[i][j];
  return s;
}

double WeightedGraph::total_weight() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += w_[i][j];
  return s;
}

WeightedGraph WeightedGraph::from_edge_list(const std::string& text, int vertices) {
  WeightedGraph g(vertices);
  std::istringstream in(text);
  int u, v;
  double w;
  while (in >> u >> v >> w) {
    if (u < 0 || v < 0 || u >= vertices || v >= vertices)
      throw std::invalid_argument("edge list: vertex out of range");
    g.set_weight(u, v, w);
  }
  return g;
}

std::string WeightedGraph::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["weights"] = w_;
  return j.dump();
}

WeightedGraph WeightedGraph::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  return WeightedGraph(j.at("n"), j.at("weights").get<std::vector<Vec>>());
}

WeightedGraph WeightedGraph::random(int vertices, double edge_probability,
                                    RandomSource& rng) {
  WeightedGraph g(vertices);
  for (int i = 0; i < vertices; ++i)
    for (int j = i + 1; j < vertices; ++j)
      if (rng.uniform() < edge_probability) g.set_weight(i, j, rng.uniform(0.5, 1.5));
  return g;
}

std::string AlphaResult::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["rho_grid"] = rho_grid;
  j["ratios"] = ratios;
  j["infimum"] = infimum;
  j["argmin_rho"] = argmin_rho;
  return j.dump();
}

AlphaResult alpha_k(int k, const Vec& rho_grid, const AlphaOptions& opts) {
  if (k != 3) throw std::invalid_argument("alpha_k: the regular partition path supports k = 3");
  if (rho_grid.empty()) throw std::invalid_argument("alpha_k: empty grid");
  double lo = -1.0 / (k - 1);
  for (double r : rho_grid)
    if (r < lo - 1e-12 || r > 1e-12)
      throw std::invalid_argument("alpha_k: grid outside [-1/(k-1), 0]");
  auto reg = ConicalPartition::regular(k, k - 1);
  JOptions jopts;
  jopts.radial = opts.radial;
  jopts.angular = opts.angular;
  // stability deficit of the rounding: numerator k - k^2 P((X,Y) in A_i x A_i)
  // for one cell of the equal-measure regular partition, so P = J(rho)/k and
  // the ratio is the cut probability over the relaxation edge term.
  auto ratio = [&](double rho) {
    double jv = noise_stability_J(reg, rho, JMethod::quadrature2d, jopts).value;
    return (k - k * k * (jv / k)) / ((k - 1) * (1.0 - rho));
  };
  AlphaResult res;
  res.k = k;
  res.rho_grid = rho_grid;
  res.ratios.reserve(rho_grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    res.ratios.push_back(ratio(rho_grid[i]));
    if (res.ratios[i] < res.ratios[best]) best = i;
  }
  // golden-section refinement around the grid argmin
  double a = rho_grid[best > 0 ? best - 1 : best];
  double b = rho_grid[best + 1 < rho_grid.size() ? best + 1 : best];
  a = std::max(a, lo);
  b = std::min(b, 0.0);
  double fa_best = res.ratios[best];
  double x_best = rho_grid[best];
  if (b > a) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = ratio(c), fd = ratio(d);
    for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = ratio(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = ratio(d);
      }
    }
    double xm = 0.5 * (a + b);
    double fm = ratio(xm);
    if (fm < fa_best) {
      fa_best = fm;
      x_best = xm;
    }
  }
  res.infimum = fa_best;
  res.argmin_rho = x_best;
  return res;
}

std::pair<double, std::vector<int>> maxkcut_bruteforce(const WeightedGraph& g, int k,
                                                       long cap) {
  int n = g.vertices();
  double total = 1;
  for (int i = 0; i < n; ++i) {
    total *= k;
    if (total > static_cast<double>(cap)) throw cap_exceeded("maxkcut_bruteforce: k^n > cap");
  }
  std::vector<int> assign(n, 0), best_assign(n, 0);
  double best = -1.0;
  long count = static_cast<long>(total);
  for (long code = 0; code < count; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(c % k);
      c /= k;
    }
    double v = g.cut_value(assign);
    if (v > best) {
      best = v;
      best_assign = assign;
    }
  }
  return {best, best_assign};
}

Embedding relax_embed(const WeightedGraph& g, int k, int d, int iterations,
                      RandomSource& rng) {
  if (d < 2) throw std::invalid_argument("relax_embed: d >= 2");
  int n = g.vertices();
  const double floor_ip = -1.0 / (k - 1);
  std::vector<Vec> v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = rng.gaussian_vec(d);
    double nm = norm2(v[i]);
    for (auto& c : v[i]) c /= nm;
  }
  Embedding emb;
  double max_row = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += g.weight(i, j);
    max_row = std::max(max_row, row);
  }
  double lipschitz = 4.0 * std::max(1.0, max_row);
  double mu = 10.0;
  const double mu_max = 2e4;
  int phase_len = std::max(1, iterations / 12);
  for (int it = 0; it < iterations; ++it) {
    if (it > 0 && it % phase_len == 0) mu = std::min(mu * 2.0, mu_max);
    // the penalty curvature grows with mu; the step must shrink with it
    double step = 1.0 / (lipschitz + 6.0 * mu);
    // gradient of sum a_ij (1 - <vi,vj>) - mu sum max(0, floor - <vi,vj>)^2
    std::vector<Vec> grad(n, Vec(d, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double ip = dot(v[i], v[j]);
        double coef = -2.0 * g.weight(i, j);  // both ordered pairs
        double slack = floor_ip - ip;
        if (slack > 0.0) coef += 4.0 * mu * slack;
        for (int c = 0; c < d; ++c) grad[i][c] += coef * v[j][c];
      }
    }
    double gnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      // project out the radial component and renormalize
      double rad = dot(grad[i], v[i]);
      for (int c = 0; c < d; ++c) grad[i][c] -= rad * v[i][c];
      gnorm += dot(grad[i], grad[i]);
      for (int c = 0; c < d; ++c) v[i][c] += step * grad[i][c];
      double nm = norm2(v[i]);
      for (auto& c : v[i]) c /= nm;
    }
    emb.gradient_norm = std::sqrt(gnorm);
  }
  emb.vectors = v;
  emb.objective = 0.0;
  emb.penalty = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double ip = dot(v[i], v[j]);
      emb.objective += g.weight(i, j) * (1.0 - ip);
      emb.penalty += std::max(0.0, floor_ip - ip);
    }
  }
  emb.converged = emb.gradient_norm < 1e-3 * std::max(1.0, g.total_weight());
  return emb;
}

std::pair<std::vector<int>, double> round_conical(const WeightedGraph& g,
                                                  const Embedding& e, int k,
                                                  RandomSource& rng, int trials) {
  int n = g.vertices();
  if (n != static_cast<int>(e.vectors.size()))
    throw std::invalid_argument("round_conical: embedding size mismatch");
  int d = static_cast<int>(e.vectors[0].size());
  if (k > d + 1) throw std::invalid_argument("round_conical: k > d+1");
  auto gens = regular_simplex_generators(k, k - 1);
  std::vector<int> best_assign(n, 0);
  double best = -1.0;
  std::vector<int> assign(n);
  for (int t = 0; t < trials; ++t) {
    // Haar frame: orthonormalized Gaussian d x (k-1) matrix
    std::vector<Vec> frame(k - 1);
    for (int c = 0; c < k - 1; ++c) {
      frame[c] = rng.gaussian_vec(d);
      for (int p = 0; p < c; ++p) {
        double ip = dot(frame[c], frame[p]);
        for (int q = 0; q < d; ++q) frame[c][q] -= ip * frame[p][q];
      }
      double nm = norm2(frame[c]);
      if (nm < 1e-12) {
        --c;
        continue;
      }
      for (auto& q : frame[c]) q /= nm;
    }
    for (int i = 0; i < n; ++i) {
      // coordinates of v_i in the rotated simplex plane
      double bestip = -1e300;
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        double ip = 0.0;
        for (int p = 0; p < k - 1; ++p) ip += gens[c][p] * dot(frame[p], e.vectors[i]);
        if (ip > bestip) {
          bestip = ip;
          arg = c;
        }
      }
      assign[i] = arg;
    }
    double v = g.cut_value(assign);
    if (v > best) {
      best = v;
      best_assign = assign;
    }
  }
  return {best_assign, best};
}

}  // namespace gns
