#include "gns/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace gns {

std::vector<Vec> regular_simplex_generators(int k, int n) {
  if (k < 2) throw std::invalid_argument("regular_simplex_generators: k < 2");
  if (k > n + 1) throw std::invalid_argument("regular_simplex_generators: k > n+1");
  const double target = -1.0 / (k - 1);
  std::vector<Vec> gens(k, Vec(n, 0.0));
  gens[0][0] = 1.0;
  if (k == 2) {
    gens[1][0] = -1.0;
    return gens;
  }
  // vertex i = (c_0, ..., c_{i-1}, b_i, 0, ...) with the shared coordinates
  // c_j fixed by <v_i, v_j> = -1/(k-1); the last vertex mirrors the one
  // before it in its final nonzero coordinate.
  Vec shared{target};
  double sq = target * target;
  for (int i = 1; i <= k - 2; ++i) {
    for (std::size_t j = 0; j < shared.size(); ++j) gens[i][j] = shared[j];
    double b = std::sqrt(std::max(0.0, 1.0 - sq));
    gens[i][i] = b;
    if (i < k - 2) {
      double cj = (target - sq) / b;
      shared.push_back(cj);
      sq += cj * cj;
    }
  }
  gens[k - 1] = gens[k - 2];
  gens[k - 1][k - 2] = -gens[k - 2][k - 2];
  return gens;
}

ConicalPartition ConicalPartition::regular(int k, int n) {
  ConicalPartition p;
  p.n_ = n;
  p.k_ = k;
  p.kind_ = PartitionKind::regular;
  p.generators_ = regular_simplex_generators(k, n);
  return p;
}

ConicalPartition ConicalPartition::from_generators(std::vector<Vec> generators) {
  if (generators.size() < 2) throw std::invalid_argument("partition needs k >= 2");
  std::size_t n = generators[0].size();
  for (const auto& g : generators)
    if (g.size() != n) throw std::invalid_argument("generators of mixed dimension");
  ConicalPartition p;
  p.n_ = static_cast<int>(n);
  p.k_ = static_cast<int>(generators.size());
  p.kind_ = PartitionKind::induced;
  p.generators_ = std::move(generators);
  return p;
}

ConicalPartition ConicalPartition::from_breakpoints(Vec breakpoints) {
  if (breakpoints.size() < 2) throw std::invalid_argument("need at least 2 breakpoints");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] < 0.0 || breakpoints[i] >= kTwoPi)
      throw std::invalid_argument("breakpoints must lie in [0, 2pi)");
    if (i > 0 && breakpoints[i] <= breakpoints[i - 1])
      throw std::invalid_argument("breakpoints must be strictly increasing");
  }
  ConicalPartition p;
  p.n_ = 2;
  p.k_ = static_cast<int>(breakpoints.size());
  p.kind_ = PartitionKind::sector2d;
  p.breakpoints_ = std::move(breakpoints);
  return p;
}

int ConicalPartition::classify(const Vec& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("classify: dimension mismatch");
  if (kind_ == PartitionKind::sector2d) {
    if (x[0] == 0.0 && x[1] == 0.0) return 0;
    double a = angle_of(x);
    if (a < breakpoints_.front()) return k_ - 1;  // wrapped cell
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
    return static_cast<int>(it - breakpoints_.begin()) - 1;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k_; ++i) best = std::max(best, dot(generators_[i], x));
  double scale = std::max({1.0, std::abs(best), norm2(x)});
  for (int i = 0; i < k_; ++i) {
    if (dot(generators_[i], x) >= best - 1e-12 * scale) return i;
  }
  return 0;  // unreachable
}

bool ConicalPartition::sector_reducible() const {
  if (kind_ == PartitionKind::sector2d) return true;
  for (const auto& g : generators_)
    for (int j = 2; j < n_; ++j)
      if (g[j] != 0.0) return false;
  return true;
}

std::vector<SectorCell> ConicalPartition::sector_cells() const {
  if (!sector_reducible())
    throw method_unavailable("partition is not reducible to planar sectors");
  std::vector<SectorCell> cells(k_);
  if (kind_ == PartitionKind::sector2d) {
    for (int i = 0; i < k_; ++i) {
      cells[i].empty = false;
      cells[i].lo = breakpoints_[i];
      cells[i].hi = (i + 1 < k_) ? breakpoints_[i + 1] : breakpoints_[0] + kTwoPi;
    }
    return cells;
  }
  // Voronoi cones of planar generators: find the angles where the winning
  // generator changes.
  std::vector<double> candidates;
  for (int i = 0; i < k_; ++i) {
    for (int j = i + 1; j < k_; ++j) {
      double dx = generators_[i][0] - generators_[j][0];
      double dy = generators_[i][1] - generators_[j][1];
      if (dx == 0.0 && dy == 0.0) continue;
      double a = wrap_angle(std::atan2(dx, -dy));  // direction orthogonal to (dx,dy)
      candidates.push_back(a);
      candidates.push_back(wrap_angle(a + kPi));
    }
  }
  if (candidates.empty()) throw method_unavailable("all generators coincide");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                   candidates.end());
  if (candidates.size() > 1 && candidates.back() > candidates.front() + kTwoPi - 1e-13)
    candidates.pop_back();
  int m = static_cast<int>(candidates.size());
  std::vector<int> winner(m);
  for (int a = 0; a < m; ++a) {
    double next = (a + 1 < m) ? candidates[a + 1] : candidates[0] + kTwoPi;
    Vec u = unit2(0.5 * (candidates[a] + next));
    u.resize(n_, 0.0);
    winner[a] = classify(u);
  }
  int start = -1;
  for (int a = 0; a < m; ++a) {
    if (winner[(a + m - 1) % m] != winner[a]) {
      start = a;
      break;
    }
  }
  if (start < 0) {
    cells[winner[0]] = SectorCell{false, 0.0, kTwoPi};
    return cells;
  }
  // run-length segments of constant winner, walking the circle once
  std::vector<std::pair<int, double>> runs;  // (cell, start angle)
  for (int step = 0; step < m; ++step) {
    int idx = (start + step) % m;
    if (step == 0 || winner[idx] != winner[(idx + m - 1) % m])
      runs.emplace_back(winner[idx], candidates[idx]);
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    int c = runs[r].first;
    double lo = runs[r].second;
    double hi = (r + 1 < runs.size()) ? runs[r + 1].second : runs[0].second;
    if (hi <= lo) hi += kTwoPi;
    if (!cells[c].empty) throw method_unavailable("disconnected sector cell");
    cells[c] = SectorCell{false, lo, hi};
  }
  return cells;
}

double ConicalPartition::cell_measure(int i) const {
  auto cells = sector_cells();
  if (i < 0 || i >= k_) throw std::invalid_argument("cell index out of range");
  return cells[i].empty ? 0.0 : cells[i].width() / kTwoPi;
}

namespace {

Vec sector_barycenter(const SectorCell& c, int n) {
  Vec z(n, 0.0);
  if (c.empty) return z;
  double mag = std::sin(0.5 * c.width()) / std::sqrt(kTwoPi);
  z[0] = mag * std::cos(c.mid());
  z[1] = mag * std::sin(c.mid());
  return z;
}

}  // namespace

Vec ConicalPartition::barycenter(int i) const {
  if (i < 0 || i >= k_) throw std::invalid_argument("cell index out of range");
  auto cells = sector_cells();
  return sector_barycenter(cells[i], n_);
}

std::pair<Vec, double> ConicalPartition::barycenter_mc(int i, RandomSource& rng,
                                                       int samples) const {
  if (i < 0 || i >= k_) throw std::invalid_argument("cell index out of range");
  Vec sum(n_, 0.0), sum_sq(n_, 0.0);
  for (int s = 0; s < samples; ++s) {
    Vec x = rng.gaussian_vec(n_);
    if (classify(x) == i) {
      for (int j = 0; j < n_; ++j) {
        sum[j] += x[j];
        sum_sq[j] += x[j] * x[j];
      }
    }
  }
  Vec mean(n_);
  double var = 0.0;
  for (int j = 0; j < n_; ++j) {
    mean[j] = sum[j] / samples;
    var += (sum_sq[j] / samples - mean[j] * mean[j]) / samples;
  }
  return {mean, std::sqrt(std::max(0.0, var))};
}

double ConicalPartition::psi_zero() const {
  auto cells = sector_cells();
  double s = 0.0;
  for (const auto& c : cells) {
    if (c.empty) continue;
    double mag = std::sin(0.5 * c.width()) / std::sqrt(kTwoPi);
    s += mag * mag;
  }
  return s;
}

double ConicalPartition::barycenter_difference_norm(int i, int j) const {
  if (i == j) throw std::invalid_argument("barycenter_difference_norm: i == j");
  return norm2(barycenter(i) - barycenter(j));
}

ConicalPartition ConicalPartition::rotated(double angle) const {
  ConicalPartition p = *this;
  if (kind_ == PartitionKind::sector2d) {
    for (auto& b : p.breakpoints_) b = wrap_angle(b + angle);
    // keep breakpoints sorted; the cell labels rotate with the arcs
    int k = k_;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return p.breakpoints_[a] < p.breakpoints_[b]; });
    Vec sorted(k);
    for (int i = 0; i < k; ++i) sorted[i] = p.breakpoints_[order[i]];
    p.breakpoints_ = std::move(sorted);
    return p;
  }
  double c = std::cos(angle), s = std::sin(angle);
  for (auto& g : p.generators_) {
    double x = g[0], y = g[1];
    g[0] = c * x - s * y;
    g[1] = s * x + c * y;
  }
  return p;
}

bool MeasureConstraint::satisfied(const ConicalPartition& p) const {
  for (int i = 0; i < p.cells(); ++i) {
    double m = p.cell_measure(i);
    if (m < 1.0 / k - epsilon || m > 1.0 / k + epsilon) return false;
  }
  return true;
}

// --- d2 metric ---------------------------------------------------------------

namespace {

double arc_overlap_linear(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// overlap length of arcs [a0,a1], [b0,b1] on the circle (a1-a0, b1-b0 <= 2pi)
double arc_overlap(double a0, double a1, double b0, double b1) {
  double shift = std::floor((b0 - a0) / kTwoPi) * kTwoPi;
  b0 -= shift;
  b1 -= shift;
  return arc_overlap_linear(a0, a1, b0, b1) + arc_overlap_linear(a0, a1, b0 - kTwoPi, b1 - kTwoPi) +
         arc_overlap_linear(a0, a1, b0 + kTwoPi, b1 + kTwoPi);
}

double best_permutation_overlap(const std::vector<SectorCell>& pa,
                                const std::vector<SectorCell>& qa, double phi,
                                std::vector<int>* best_perm) {
  int k = static_cast<int>(pa.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  std::vector<int> arg = perm;
  do {
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto& a = pa[i];
      const auto& b = qa[perm[i]];
      if (a.empty || b.empty) continue;
      s += arc_overlap(a.lo, a.hi, b.lo + phi, b.hi + phi);
    }
    if (s > best) {
      best = s;
      arg = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best_perm) *best_perm = arg;
  return best / kTwoPi;
}

}  // namespace

PartitionDistance d2_distance(const ConicalPartition& p, const ConicalPartition& q) {
  if (p.dimension() != q.dimension() || p.cells() != q.cells())
    throw std::invalid_argument("d2_distance: mismatched (n, k)");
  auto pa = p.sector_cells();
  auto qa = q.sector_cells();
  auto objective = [&](double phi) { return best_permutation_overlap(pa, qa, phi, nullptr); };
  const int scan = 4096;
  double best_phi = 0.0, best_ov = -1.0;
  for (int s = 0; s < scan; ++s) {
    double phi = kTwoPi * s / scan;
    double ov = objective(phi);
    if (ov > best_ov) {
      best_ov = ov;
      best_phi = phi;
    }
  }
  // golden-section refinement around the incumbent
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = best_phi - kTwoPi / scan, b = best_phi + kTwoPi / scan;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(d);
    }
  }
  double phi = 0.5 * (a + b);
  PartitionDistance out;
  out.rotation = wrap_angle(phi);
  double ov = best_permutation_overlap(pa, qa, phi, &out.permutation);
  if (ov < best_ov) {  // refinement cannot be worse than the scan incumbent
    phi = best_phi;
    out.rotation = wrap_angle(phi);
    ov = best_permutation_overlap(pa, qa, phi, &out.permutation);
  }
  double total_a = 0.0, total_b = 0.0;
  for (const auto& c2 : pa) total_a += c2.width() / kTwoPi;
  for (const auto& c2 : qa) total_b += c2.width() / kTwoPi;
  out.value = std::sqrt(std::max(0.0, total_a + total_b - 2.0 * ov));
  return out;
}

PartitionDistance d2_distance_mc(const ConicalPartition& p, const ConicalPartition& q,
                                 RandomSource& rng, int samples) {
  if (p.dimension() != 2 || q.dimension() != 2)
    throw method_unavailable("d2_distance_mc: planar partitions only");
  auto pa = p.sector_cells();
  auto qa = q.sector_cells();
  // sample angles once; arcs are counted through the sorted angle list
  Vec angles(samples);
  for (int s = 0; s < samples; ++s) {
    double x = rng.gaussian(), y = rng.gaussian();
    angles[s] = wrap_angle(std::atan2(y, x));
  }
  std::sort(angles.begin(), angles.end());
  auto arc_count = [&](double lo, double hi) -> double {
    double w = hi - lo;
    lo = wrap_angle(lo);
    double cnt = 0.0;
    for (double span = w; span > 1e-15;) {
      double seg = std::min(span, kTwoPi - lo);
      auto it0 = std::lower_bound(angles.begin(), angles.end(), lo);
      auto it1 = std::lower_bound(angles.begin(), angles.end(), lo + seg);
      cnt += static_cast<double>(it1 - it0);
      span -= seg;
      lo = 0.0;
    }
    return cnt;
  };
  auto mass_overlap = [&](double phi, std::vector<int>* bp) {
    int k = p.cells();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1.0;
    std::vector<int> arg = perm;
    do {
      double s = 0.0;
      for (int i = 0; i < k; ++i) {
        const auto& a = pa[i];
        const auto& b = qa[perm[i]];
        if (a.empty || b.empty) continue;
        // count samples in the arc intersection
        double shift = std::floor((b.lo + phi - a.lo) / kTwoPi) * kTwoPi;
        double b0 = b.lo + phi - shift, b1 = b.hi + phi - shift;
        for (double off : {-kTwoPi, 0.0, kTwoPi}) {
          double lo = std::max(a.lo, b0 + off), hi = std::min(a.hi, b1 + off);
          if (hi > lo) s += arc_count(lo, hi);
        }
      }
      if (s > best) {
        best = s;
        arg = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (bp) *bp = arg;
    return best / samples;
  };
  const int scan = 1024;
  double best_phi = 0.0, best_ov = -1.0;
  for (int s = 0; s < scan; ++s) {
    double phi = kTwoPi * s / scan;
    double ov = mass_overlap(phi, nullptr);
    if (ov > best_ov) {
      best_ov = ov;
      best_phi = phi;
    }
  }
  PartitionDistance out;
  out.rotation = best_phi;
  double ov = mass_overlap(best_phi, &out.permutation);
  double total_a = 0.0, total_b = 0.0;
  for (const auto& c : pa) total_a += c.width() / kTwoPi;
  for (const auto& c : qa) total_b += c.width() / kTwoPi;
  out.value = std::sqrt(std::max(0.0, total_a + total_b - 2.0 * ov));
  return out;
}

// --- serialization -----------------------------------------------------------

std::string ConicalPartition::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["k"] = k_;
  switch (kind_) {
    case PartitionKind::regular: j["kind"] = "regular"; break;
    case PartitionKind::induced: j["kind"] = "induced"; break;
    case PartitionKind::sector2d: j["kind"] = "sector2d"; break;
  }
  if (kind_ == PartitionKind::sector2d) {
    j["breakpoints"] = breakpoints_;
  } else {
    j["generators"] = generators_;
  }
  return j.dump();
}

ConicalPartition ConicalPartition::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::string kind = j.at("kind");
  if (kind == "sector2d") {
    return from_breakpoints(j.at("breakpoints").get<Vec>());
  }
  auto gens = j.at("generators").get<std::vector<Vec>>();
  if (kind == "regular") {
    ConicalPartition p = from_generators(std::move(gens));
    p.kind_ = PartitionKind::regular;
    return p;
  }
  return from_generators(std::move(gens));
}

}  // namespace gns
