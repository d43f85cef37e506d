#include "gns/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "gns/discrete.hpp"
#include "gns/maxkcut.hpp"
#include "gns/optimize.hpp"
#include "gns/stability.hpp"

namespace gns {

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!ok) detail << "FAILED: " << what << "; ";
  }
  void note(const std::string& what) { detail << what << "; "; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Check criterion_psi0_suprema() {
  Check c;
  RandomSource rng(101);
  auto r2 = sup_psi_zero_search(2, 2, 30, rng);
  auto r3 = sup_psi_zero_search(3, 2, 30, rng);
  c.require(std::abs(r2.value - 1.0 / kPi) <= 1e-3, "k=2 supremum != 1/pi");
  c.require(std::abs(r3.value - 9.0 / (8 * kPi)) <= 1e-3, "k=3 supremum != 9/8pi");
  c.note("k=2 -> " + fmt(r2.value) + ", k=3 -> " + fmt(r3.value));
  return c;
}

Check criterion_regular_geometry() {
  Check c;
  auto reg = ConicalPartition::regular(3, 2);
  double mag_expect = std::sqrt(6.0) / (4.0 * std::sqrt(kPi));
  double diff_expect = 3.0 * std::sqrt(2.0) / (4.0 * std::sqrt(kPi));
  // closed form
  for (int i = 0; i < 3; ++i)
    c.require(std::abs(norm2(reg.barycenter(i)) - mag_expect) <= 1e-8, "|z_i| closed form");
  c.require(std::abs(reg.barycenter_difference_norm(0, 1) - diff_expect) <= 1e-8,
            "|z_i - z_j| closed form");
  // quadrature route: degree-1 cell coefficients
  auto coef = hermite_coefficients_of_cell(reg, 0, 1);
  Vec zq{coef.coefficient(MultiIndex({1, 0})), coef.coefficient(MultiIndex({0, 1}))};
  c.require(std::abs(norm2(zq) - mag_expect) <= 1e-8, "|z_i| quadrature");
  auto coef1 = hermite_coefficients_of_cell(reg, 1, 1);
  Vec zq1{coef1.coefficient(MultiIndex({1, 0})), coef1.coefficient(MultiIndex({0, 1}))};
  c.require(std::abs(norm2(zq - zq1) - diff_expect) <= 1e-8, "|z_i - z_j| quadrature");
  c.note("|z| = " + fmt(norm2(zq)) + ", |z_i - z_j| = " + fmt(norm2(zq - zq1)));
  return c;
}

Check criterion_halfspace_stability() {
  Check c;
  auto halves = ConicalPartition::from_breakpoints({0.0, kPi});
  for (double rho : {0.1, 0.5, 0.9}) {
    double exact = 0.5 + std::asin(rho) / kPi;
    JOptions mo;
    mo.samples = 1000000;
    mo.seed = 2000 + static_cast<int>(rho * 10);
    auto m = noise_stability_J(halves, rho, JMethod::montecarlo, mo);
    c.require(std::abs(m.value - exact) <= 3.0 * m.error_estimate,
              "MC J off at rho=" + fmt(rho));
    auto q = noise_stability_J(halves, rho, JMethod::quadrature2d);
    c.require(std::abs(q.value - exact) <= 1e-5, "quadrature J off at rho=" + fmt(rho));
    if (rho == 0.5) c.note("J(0.5) = " + fmt(q.value) + " vs " + fmt(exact));
  }
  return c;
}

Check criterion_spectral_consistency() {
  Check c;
  auto reg = ConicalPartition::regular(3, 2);
  JOptions so;
  so.degree = 24;
  for (double rho : {0.05, 0.1, 0.3}) {
    double q = noise_stability_J(reg, rho, JMethod::quadrature2d).value;
    double s = noise_stability_J(reg, rho, JMethod::hermite_series, so).value;
    c.require(std::abs(q - s) <= 1e-4, "series vs quadrature at rho=" + fmt(rho));
    if (rho == 0.3) c.note("rho=0.3: |diff| = " + fmt(std::abs(q - s)));
  }
  return c;
}

Check criterion_operator_identities() {
  Check c;
  auto grid2 = QuadratureGrid::tensor(2, 28);
  auto grid3 = QuadratureGrid::tensor(3, 20);
  RandomSource rng(77);
  // eigenrelation
  double worst_eigen = 0.0;
  for (int n : {2, 3}) {
    const auto& grid = n == 2 ? grid2 : grid3;
    for (const auto& ell : MultiIndex::up_to_degree(n, 4)) {
      if (ell.degree() == 0) continue;
      auto f = [&](const Vec& y) { return hermite_eval_multi_orthonormal(ell, y); };
      for (double rho : {0.2, 0.7}) {
        Vec x(n);
        for (auto& v : x) v = rng.uniform(-3.0, 3.0);
        double err =
            std::abs(t_rho_apply(f, rho, x, grid) - std::pow(rho, ell.degree()) * f(x));
        worst_eigen = std::max(worst_eigen, err);
      }
    }
  }
  c.require(worst_eigen <= 1e-6, "eigenrelation error " + fmt(worst_eigen));
  // semigroup composition on sector indicators
  SectorCell cell{false, 0.3, 0.3 + 2.1};
  double worst_semi = 0.0;
  for (double r1 : {0.3, 0.8}) {
    for (double r2 : {0.3, 0.8}) {
      auto inner = [&](const Vec& q) { return t_rho_sector(cell, r2, q); };
      for (Vec x : {Vec{0.6, -0.2}, Vec{-1.2, 0.9}}) {
        double err = std::abs(t_rho_apply(inner, r1, x, grid2) -
                              t_rho_sector(cell, r1 * r2, x));
        worst_semi = std::max(worst_semi, err);
      }
    }
  }
  c.require(worst_semi <= 1e-5, "semigroup error " + fmt(worst_semi));
  // derivative identity: integral route vs generator route vs finite differences
  auto g = [](const Vec& y) { return std::exp(0.4 * y[0] - 0.2 * y[1] * y[1] * 0.5); };
  double worst_routes = 0.0, worst_fd = 0.0;
  for (double rho : {0.2, 0.5}) {
    for (Vec x : {Vec{0.7, -0.3}, Vec{-0.5, 1.1}}) {
      double di = dt_drho(g, rho, x, grid2);
      double dl = dt_drho_l_route(g, rho, x, grid2);
      double h = 1e-4;
      double fd =
          (t_rho_apply(g, rho + h, x, grid2) - t_rho_apply(g, rho - h, x, grid2)) / (2 * h);
      worst_routes = std::max(worst_routes, std::abs(di - dl));
      worst_fd = std::max(worst_fd, std::abs(di - fd));
    }
  }
  c.require(worst_routes <= 1e-5, "route disagreement " + fmt(worst_routes));
  c.require(worst_fd <= 1e-4, "finite-difference disagreement " + fmt(worst_fd));
  c.note("eigen " + fmt(worst_eigen) + ", semigroup " + fmt(worst_semi) + ", routes " +
         fmt(worst_routes));
  return c;
}

Check criterion_cone_moment() {
  Check c;
  RandomSource rng(303);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    double lo = rng.uniform(0.0, kTwoPi);
    double w = rng.uniform(0.05, kTwoPi - 0.05);
    SectorCell cell{false, lo, lo + w};
    worst = std::max(worst, std::abs(volume_term_sector(cell, 0.4, {0.0, 0.0})));
  }
  c.require(worst <= 1e-8, "cone moment " + fmt(worst));
  c.note("max |moment| = " + fmt(worst));
  return c;
}

Check criterion_first_variation() {
  Check c;
  VariationGridSpec spec;  // r <= 3, 24 x 48, margin 1e-2, tol 1e-6
  auto reg = ConicalPartition::regular(3, 2);
  auto rep = first_variation_check(reg, 0.05, spec);
  c.require(rep.violations.empty(),
            "regular partition produced " + std::to_string(rep.violations.size()) +
                " violations");
  auto pert = ConicalPartition::from_breakpoints({kPi / 3 + 0.2, kPi, 5 * kPi / 3});
  VariationGridSpec fine = spec;
  fine.angular = 192;
  auto rep2 = first_variation_check(pert, 0.05, fine);
  c.require(!rep2.violations.empty(), "perturbed partition produced no violations");
  c.note("regular: 0 of " + std::to_string(rep.checked) + "; perturbed: " +
         std::to_string(rep2.violations.size()) + " violations");
  return c;
}

Check criterion_small_rho_optimality() {
  Check c;
  RandomSource rng(65537);
  auto fam = PerturbationFamily::around_regular(3, 0.5);
  auto res = perturbation_search_psi(0.05, fam, 200, rng);
  auto d2 = d2_distance(res.best_partition, ConicalPartition::regular(3, 2));
  c.require(d2.value <= 1e-2, "incumbent d2 = " + fmt(d2.value));
  c.require(res.base_value >= res.max_visited - 1e-6,
            "psi(regular) undercut by " + fmt(res.max_visited - res.base_value));
  c.note("d2(incumbent, regular) = " + fmt(d2.value) + ", evaluations = " +
         std::to_string(res.evaluations) + "; tested range rho = 0.05 only");
  return c;
}

Check criterion_negative_rho_witness() {
  Check c;
  auto w = negative_rho_witness(-0.05);
  c.require(w.found, "no witness at rho = -0.05");
  if (w.found) {
    c.require(w.value < 0.0, "witness value not negative");
    c.require(std::abs(w.value) > 5.0 * w.error_estimate, "witness not certified");
  }
  auto wp = negative_rho_witness(0.05);
  c.require(!wp.found, "spurious witness at rho = +0.05");
  c.note("value " + fmt(w.value) + " at |x| = " + fmt(w.found ? norm2(w.x) : 0.0) +
         ", +rho scan " + std::to_string(wp.scanned) + " points clean");
  return c;
}

Check criterion_ftc_reconstruction() {
  Check c;
  auto reg = ConicalPartition::regular(3, 2);
  Vec nodes, weights;
  gauss_legendre(64, 0.0, 0.3, nodes, weights);
  double integral = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    integral += weights[i] * psi_rho(reg, nodes[i], 28).value;
  double direct = noise_stability_J(reg, 0.3, JMethod::quadrature2d).value - 1.0 / 3.0;
  c.require(std::abs(integral - direct) <= 1e-4,
            "FTC mismatch " + fmt(std::abs(integral - direct)));
  c.note("J - 1/3 = " + fmt(direct) + ", integral = " + fmt(integral));
  return c;
}

Check criterion_discrete_stability() {
  Check c;
  KaryBasis basis(3);
  double worst = 0.0;
  for (int m : {1, 3, 5}) {
    auto plur = plurality_fn(m, 3);
    for (double rho : {-0.4, 0.1, 0.5}) {
      double a = discrete_stability(plur, rho, basis);
      double b = discrete_stability_rerandomized(plur, rho);
      worst = std::max(worst, std::abs(a - b));
    }
  }
  c.require(worst <= 1e-12, "route disagreement " + fmt(worst));
  auto dict = plurality_fn(1, 3);
  for (double rho : {-0.4, 0.1, 0.5}) {
    double expect = (1 + 2 * rho) / 3;
    c.require(std::abs(discrete_stability(dict, rho, basis) - expect) <= 1e-13,
              "dictator fourier value");
    c.require(std::abs(discrete_stability_rerandomized(dict, rho) - expect) <= 1e-13,
              "dictator rerandomized value");
  }
  c.note("max route difference " + fmt(worst));
  return c;
}

Check criterion_alpha3() {
  Check c;
  Vec grid;
  for (int i = 0; i <= 25; ++i) grid.push_back(-0.5 + 0.5 * i / 25);
  AlphaOptions coarse;
  AlphaOptions fine;
  fine.radial = 128;
  fine.angular = 96;
  auto a = alpha_k(3, grid, coarse);
  auto b = alpha_k(3, grid, fine);
  c.require(std::abs(a.infimum - 0.836) <= 5e-3, "alpha_3 = " + fmt(a.infimum));
  c.require(std::abs(a.infimum - b.infimum) <= 1e-4,
            "resolutions disagree by " + fmt(std::abs(a.infimum - b.infimum)));
  c.note("alpha_3 = " + fmt(a.infimum) + " at rho = " + fmt(a.argmin_rho) +
         ", resolution delta " + fmt(std::abs(a.infimum - b.infimum)));
  return c;
}

Check criterion_pipeline() {
  Check c;
  RandomSource master(424242);
  int good = 0, total = 100;
  bool bound_ok = true;
  double worst_ratio = 2.0;
  for (int inst = 0; inst < total; ++inst) {
    RandomSource rng = master.substream(inst);
    auto g = WeightedGraph::random(8, 0.5, rng);
    if (g.total_weight() == 0.0) {
      ++good;
      continue;
    }
    auto [opt, oassign] = maxkcut_bruteforce(g, 3);
    auto emb = relax_embed(g, 3, 8, 600, rng);
    auto [assign, cut] = round_conical(g, emb, 3, rng, 100);
    bound_ok = bound_ok && (cut <= opt + 1e-9);
    double ratio = opt > 0 ? cut / opt : 1.0;
    worst_ratio = std::min(worst_ratio, ratio);
    if (ratio >= 0.83) ++good;
  }
  c.require(good >= 95, "only " + std::to_string(good) + "/100 instances above 0.83");
  c.require(bound_ok, "a rounded cut exceeded the brute-force optimum");
  c.note(std::to_string(good) + "/100 above 0.83, worst ratio " + fmt(worst_ratio));
  return c;
}

Check criterion_stability_metric() {
  Check c;
  RandomSource rng(13579);
  auto rows = psi0_stability_probe({1e-4, 1e-6}, rng, 24);
  for (const auto& r : rows) {
    c.require(r.pass, "probe failed at eps = " + fmt(r.epsilon));
    c.note("eps " + fmt(r.epsilon) + ": d2 " + fmt(r.max_d2) + " <= " + fmt(r.bound));
  }
  return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
  struct Entry {
    int id;
    const char* name;
    std::function<Check()> fn;
  };
  const std::vector<Entry> entries = {
      {1, "closed-form psi0 suprema", criterion_psi0_suprema},
      {2, "regular partition geometry", criterion_regular_geometry},
      {3, "half-space stability formula", criterion_halfspace_stability},
      {4, "spectral vs quadrature stability", criterion_spectral_consistency},
      {5, "operator identities", criterion_operator_identities},
      {6, "cone moment vanishes", criterion_cone_moment},
      {7, "first-variation containment", criterion_first_variation},
      {8, "small-rho optimality search", criterion_small_rho_optimality},
      {9, "negative-rho witness", criterion_negative_rho_witness},
      {10, "derivative reconstruction", criterion_ftc_reconstruction},
      {11, "discrete stability routes", criterion_discrete_stability},
      {12, "alpha_3 constant", criterion_alpha3},
      {13, "max-3-cut pipeline", criterion_pipeline},
      {14, "psi0 stability metric", criterion_stability_metric},
  };
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    try {
      Check c = e.fn();
      r.pass = c.pass;
      r.detail = c.detail.str();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(r);
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] C%02d %-34s (%6.2fs) %s",
                  r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                  r.detail.c_str());
    out << line << "\n";
    out.flush();
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace gns
