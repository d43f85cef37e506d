#include "gns/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace gns {

namespace {

// strictly increasing breakpoints in [0, 2pi) from arbitrary angles
Vec normalize_breakpoints(Vec bp) {
  for (auto& b : bp) b = wrap_angle(b);
  std::sort(bp.begin(), bp.end());
  for (std::size_t i = 1; i < bp.size(); ++i)
    if (bp[i] - bp[i - 1] < 1e-12) bp[i] = bp[i - 1] + 1e-12;
  if (bp.back() >= kTwoPi) {
    for (auto& b : bp) b *= (kTwoPi - 1e-12) / bp.back();
  }
  return bp;
}

ConicalPartition partition_from_angles(const Vec& angles) {
  return ConicalPartition::from_breakpoints(normalize_breakpoints(angles));
}

}  // namespace

ConicalPartition PerturbationFamily::at(const Vec& offsets) const {
  if (static_cast<int>(offsets.size()) != free_parameters())
    throw std::invalid_argument("PerturbationFamily::at: wrong parameter count");
  Vec bp = base.breakpoints();
  for (std::size_t i = 0; i < bp.size(); ++i)
    bp[i] += std::clamp(offsets[i], -bound, bound);
  return partition_from_angles(bp);
}

PerturbationFamily PerturbationFamily::around_regular(int k, double bound) {
  Vec bp(k);
  // breakpoints of the regular k-sector partition, first boundary at pi/k
  for (int i = 0; i < k; ++i) bp[i] = wrap_angle(kPi / k + i * kTwoPi / k);
  PerturbationFamily fam{partition_from_angles(bp), bound};
  return fam;
}

SupPsiZeroResult sup_psi_zero_search(int k, int n, int restarts, RandomSource& rng,
                                     bool force_empty_cell) {
  if (k != 2 && k != 3) throw std::invalid_argument("sup_psi_zero_search: k must be 2 or 3");
  if (n != 2) throw std::invalid_argument("sup_psi_zero_search: sector family needs n = 2");
  auto evaluate = [&](Vec bp) -> std::pair<double, ConicalPartition> {
    if (force_empty_cell) bp.back() = bp[bp.size() - 2] + 1e-12;
    auto p = partition_from_angles(bp);
    return {p.psi_zero(), p};
  };
  SupPsiZeroResult best;
  best.restarts = restarts;
  best.value = -1.0;
  for (int r = 0; r < restarts; ++r) {
    Vec bp(k);
    for (int i = 0; i < k; ++i) bp[i] = rng.uniform(0.0, kTwoPi);
    auto [v, p] = evaluate(bp);
    double step = 0.4;
    for (int round = 0; round < 60 && step > 1e-10; ++round) {
      bool improved = false;
      for (int i = 0; i < k; ++i) {
        for (double dir : {+1.0, -1.0}) {
          Vec cand = bp;
          cand[i] += dir * step;
          auto [cv, cp] = evaluate(cand);
          if (cv > v) {
            v = cv;
            p = cp;
            bp = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (v > best.value) {
      best.value = v;
      best.partition = p;
    }
  }
  return best;
}

std::string VariationReport::to_json() const {
  nlohmann::json j;
  j["rho"] = rho;
  j["checked"] = checked;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : violations) {
    j["violations"].push_back(
        {{"x", v.x}, {"claimed", v.claimed}, {"better", v.better}, {"gap", v.gap}});
  }
  return j.dump();
}

VariationReport first_variation_check(const ConicalPartition& p, double rho,
                                      const VariationGridSpec& spec) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("first_variation_check: rho in (0,1) required");
  if (spec.radial < 1 || spec.angular < 1)
    throw std::invalid_argument("first_variation_check: empty grid");
  auto cells = p.sector_cells();
  int k = p.cells();
  // boundary rays of the partition
  std::vector<Vec> rays;
  for (const auto& c : cells) {
    if (c.empty || c.width() >= kTwoPi - 1e-14) continue;
    rays.push_back(unit2(c.lo));
    rays.push_back(unit2(c.hi));
  }
  auto ray_distance = [&](const Vec& x) {
    double d = norm2(x);
    for (const auto& u : rays) {
      double along = x[0] * u[0] + x[1] * u[1];
      double dd = along >= 0.0
                      ? std::abs(x[1] * u[0] - x[0] * u[1])
                      : std::sqrt(x[0] * x[0] + x[1] * x[1]);
      d = std::min(d, dd);
    }
    return d;
  };
  VariationReport rep;
  rep.rho = rho;
  for (int ir = 1; ir <= spec.radial; ++ir) {
    double r = spec.r_max * ir / spec.radial;
    for (int ia = 0; ia < spec.angular; ++ia) {
      Vec x = unit2(kTwoPi * ia / spec.angular);
      x[0] *= r;
      x[1] *= r;
      if (ray_distance(x) < spec.margin) continue;
      int claimed = p.classify(x);
      std::vector<double> vals(k);
      for (int c = 0; c < k; ++c) vals[c] = lt_rho_indicator(p, c, rho, x);
      double own = vals[claimed];
      for (int c = 0; c < k; ++c) {
        if (c == claimed) continue;
        if (vals[c] > own + spec.tolerance) {
          rep.violations.push_back(VariationViolation{x, claimed, c, vals[c] - own});
          break;
        }
      }
      rep.points.push_back(std::move(x));
      rep.claimed.push_back(claimed);
      rep.values.push_back(std::move(vals));
      ++rep.checked;
    }
  }
  if (rep.checked == 0) throw std::invalid_argument("first_variation_check: empty grid");
  return rep;
}

int psi_degree_for_tail(int k, double rho, double tol) {
  for (int d = 1; d <= 200; ++d) {
    if (psi_series_tail_bound(k, rho, d) <= tol) return d;
  }
  return 200;
}

namespace {

struct RestartOutcome {
  double best = -1e300;
  Vec offsets;
  double max_visited = -1e300;
  long evaluations = 0;
};

}  // namespace

PerturbationSearchResult perturbation_search_psi(double rho, const PerturbationFamily& family,
                                                 int restarts, RandomSource& rng) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("perturbation_search_psi: rho in [0,1) required");
  int degree = std::max(2, psi_degree_for_tail(family.base.cells(), rho, 1e-10));
  int np = family.free_parameters();
  auto eval = [&](const Vec& offsets, RestartOutcome& out) {
    double v = psi_rho(family.at(offsets), rho, degree).value;
    out.max_visited = std::max(out.max_visited, v);
    ++out.evaluations;
    return v;
  };
  std::vector<std::uint64_t> seeds(std::max(restarts, 1));
  RandomSource master = rng.substream(0x70657274);
  for (int r = 0; r < static_cast<int>(seeds.size()); ++r)
    seeds[r] = master.substream(r).seed();
  std::vector<RestartOutcome> outcomes(std::max(restarts, 1));
  parallel_chunks(static_cast<int>(outcomes.size()), [&](int r) {
    RandomSource local(seeds[r]);
    RestartOutcome& out = outcomes[r];
    Vec offsets(np, 0.0);
    if (r > 0) {
      for (auto& o : offsets) o = local.uniform(-family.bound, family.bound);
    }
    double v = eval(offsets, out);
    double step = family.bound > 0.0 ? 0.5 * family.bound : 0.0;
    for (int round = 0; round < 40 && step > 1e-7; ++round) {
      bool improved = false;
      for (int i = 0; i < np; ++i) {
        for (double dir : {+1.0, -1.0}) {
          Vec cand = offsets;
          cand[i] = std::clamp(cand[i] + dir * step, -family.bound, family.bound);
          double cv = eval(cand, out);
          if (cv > v) {
            v = cv;
            offsets = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    out.best = v;
    out.offsets = offsets;
  });
  PerturbationSearchResult res;
  res.degree = degree;
  res.base_value = psi_rho(family.base, rho, degree).value;
  res.max_visited = res.base_value;
  res.best_value = -1e300;
  for (const auto& out : outcomes) {
    res.evaluations += out.evaluations;
    res.max_visited = std::max(res.max_visited, out.max_visited);
    if (out.best > res.best_value) {
      res.best_value = out.best;
      res.best_offsets = out.offsets;
    }
  }
  res.best_partition = family.at(res.best_offsets);
  return res;
}

std::string Witness::to_json() const {
  nlohmann::json j;
  j["found"] = found;
  j["rho"] = rho;
  j["cell_i"] = cell_i;
  j["cell_j"] = cell_j;
  j["value"] = value;
  j["error_estimate"] = error_estimate;
  j["improvement"] = improvement;
  j["scanned"] = scanned;
  j["scan_radius_max"] = scan_radius_max;
  if (found) j["x"] = x;
  return j.dump();
}

Witness negative_rho_witness(double rho, const WitnessScanSpec& spec) {
  if (!(std::abs(rho) > 0.0 && std::abs(rho) < 0.2))
    throw std::invalid_argument("negative_rho_witness: |rho| in (0, 0.2) required");
  // canonical frame: adjacent cells share the positive x2-axis, cell_i lies in
  // {x1 >= 0}; the cell generator is y = (cos pi/6, sin pi/6) and the
  // neighbor's inward normal is yt = (cos 2pi/3, sin 2pi/3)
  auto p = ConicalPartition::from_breakpoints(
      {0.5 * kPi, 7.0 * kPi / 6.0, 11.0 * kPi / 6.0});
  const int cell_i = 2, cell_j = 0;
  const Vec y = unit2(kPi / 6.0);
  const Vec yt = unit2(2.0 * kPi / 3.0);
  Witness w;
  w.rho = rho;
  w.cell_i = cell_i;
  w.cell_j = cell_j;
  double ar = std::abs(rho);
  std::vector<Vec> points;
  for (int ia = 0; ia < spec.along; ++ia) {
    double a = (spec.along_scaled_min +
                (spec.along_scaled_max - spec.along_scaled_min) * ia /
                    std::max(1, spec.along - 1)) /
               ar;
    for (int ib = 1; ib <= spec.across; ++ib) {
      double b = spec.across_max * ib / spec.across;
      points.push_back({a * y[0] + b * yt[0], a * y[1] + b * yt[1]});
    }
  }
  for (int ir = 1; ir <= spec.near_radial; ++ir) {
    double r = spec.near_radius_max * ir / spec.near_radial;
    for (int ia = 0; ia < spec.near_angular; ++ia) {
      double t = -kPi / 6.0 + 0.02 + (kPi * 2.0 / 3.0 - 0.04) * ia / (spec.near_angular - 1);
      points.push_back({r * std::cos(t), r * std::sin(t)});
    }
  }
  for (const auto& x : points) {
    if (p.classify(x) != cell_i) continue;
    ++w.scanned;
    w.scan_radius_max = std::max(w.scan_radius_max, norm2(x));
    LtDifference d = lt_rho_difference(p, cell_i, cell_j, rho, x);
    double err = std::max(std::abs(d.boundary - d.integral), 1e-9);
    if (d.boundary < 0.0 && std::abs(d.boundary) > 5.0 * err) {
      w.found = true;
      w.x = x;
      w.value = d.boundary;
      w.error_estimate = err;
      w.improvement = 2.0 * std::abs(d.boundary);
      return w;
    }
  }
  return w;
}

std::vector<StabilityProbeRow> psi0_stability_probe(const std::vector<double>& epsilons,
                                                    RandomSource& rng, int directions) {
  const double sup = 9.0 / (8.0 * kPi);
  auto reg = ConicalPartition::regular(3, 2);
  auto widths_to_partition = [](double w1, double w2) {
    return ConicalPartition::from_breakpoints({0.0, w1, w1 + w2});
  };
  auto psi_of_widths = [&](double w1, double w2) {
    return widths_to_partition(w1, w2).psi_zero();
  };
  std::vector<StabilityProbeRow> rows;
  for (double eps : epsilons) {
    if (!(eps >= 0.0 && eps < 0.01))
      throw std::invalid_argument("psi0_stability_probe: eps in [0, 1/100) required");
    StabilityProbeRow row;
    row.epsilon = eps;
    row.bound = 6.0 * std::pow(eps, 1.0 / 8.0);
    double target = sup - eps;
    double w0 = kTwoPi / 3.0;
    if (eps == 0.0) {
      row.max_d2 = d2_distance(widths_to_partition(w0, w0), reg).value;
      row.pass = row.max_d2 <= std::max(row.bound, 1e-7);
      rows.push_back(row);
      continue;
    }
    for (int d = 0; d < directions; ++d) {
      double phi = rng.uniform(0.0, kTwoPi);
      double d1 = std::cos(phi), d2v = std::sin(phi);
      // scale the width perturbation until psi_0 hits the target level
      double t_lo = 0.0, t_hi = 1e-4;
      while (psi_of_widths(w0 + t_hi * d1, w0 + t_hi * d2v) > target && t_hi < 2.0)
        t_hi *= 2.0;
      if (psi_of_widths(w0 + t_hi * d1, w0 + t_hi * d2v) > target) continue;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (t_lo + t_hi);
        if (psi_of_widths(w0 + mid * d1, w0 + mid * d2v) > target)
          t_lo = mid;
        else
          t_hi = mid;
      }
      double t = t_lo;  // deficit at most eps
      auto q = widths_to_partition(w0 + t * d1, w0 + t * d2v);
      row.max_d2 = std::max(row.max_d2, d2_distance(q, reg).value);
    }
    row.pass = row.max_d2 <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gns
