#include <doctest.h>

#include <cmath>

#include "gns/stability.hpp"
#include "oracles.hpp"

using namespace gns;

namespace {

const QuadratureGrid& grid1() {
  static QuadratureGrid g = QuadratureGrid::tensor(1, 32);
  return g;
}
const QuadratureGrid& grid2() {
  static QuadratureGrid g = QuadratureGrid::tensor(2, 28);
  return g;
}
const QuadratureGrid& grid3() {
  static QuadratureGrid g = QuadratureGrid::tensor(3, 20);
  return g;
}
const QuadratureGrid& grid_for(int n) {
  return n == 1 ? grid1() : (n == 2 ? grid2() : grid3());
}

}  // namespace

TEST_SUITE_BEGIN("stability");

TEST_CASE("noise operator basics") {
  auto one = [](const Vec&) { return 1.0; };
  for (double rho : {-0.7, 0.0, 0.4, 0.99}) {
    CHECK(t_rho_apply(one, rho, {0.3, -1.0}, grid2()) == doctest::Approx(1.0).epsilon(1e-13));
  }
  // exponential eigenfunction: T_rho e^{lx - l^2/2} = e^{(l rho) x - (l rho)^2/2}
  double lambda = 0.8;
  auto f = [&](const Vec& y) { return std::exp(lambda * y[0] - 0.5 * lambda * lambda); };
  for (double rho : {0.3, 0.7}) {
    for (double x : {-1.5, 0.2, 2.0}) {
      double lr = lambda * rho;
      CHECK(t_rho_apply(f, rho, {x}, grid1()) ==
            doctest::Approx(std::exp(lr * x - 0.5 * lr * lr)).epsilon(1e-10));
    }
  }
  // rho = +-1 degenerate to evaluation
  auto h = [](const Vec& y) { return y[0] * y[0] - y[1]; };
  CHECK(t_rho_apply(h, 1.0, {2.0, 1.0}, grid2()) == doctest::Approx(3.0));
  CHECK(t_rho_apply(h, -1.0, {2.0, 1.0}, grid2()) == doctest::Approx(5.0));
}

TEST_CASE("eigenrelation on the orthonormal basis") {
  for (int n : {1, 2, 3}) {
    auto idx = MultiIndex::up_to_degree(n, 4);
    RandomSource rng(100 + n);
    for (const auto& ell : idx) {
      if (ell.degree() == 0) continue;
      auto f = [&](const Vec& y) { return hermite_eval_multi_orthonormal(ell, y); };
      for (double rho : {0.2, 0.7}) {
        Vec x(n);
        for (auto& c : x) c = rng.uniform(-3.0, 3.0);
        double lhs = t_rho_apply(f, rho, x, grid_for(n));
        double rhs = std::pow(rho, ell.degree()) * f(x);
        CHECK(std::abs(lhs - rhs) <= 1e-6);
      }
    }
  }
}

TEST_CASE("semigroup composition on sector indicators") {
  SectorCell cell{false, 0.4, 0.4 + 2.0};
  for (double r1 : {0.3, 0.8}) {
    for (double r2 : {0.3, 0.8}) {
      auto inner = [&](const Vec& q) { return t_rho_sector(cell, r2, q); };
      for (Vec x : {Vec{0.5, 0.2}, Vec{-1.0, 1.5}, Vec{2.0, -0.3}}) {
        double composed = t_rho_apply(inner, r1, x, grid2());
        double direct = t_rho_sector(cell, r1 * r2, x);
        CHECK(std::abs(composed - direct) <= 1e-5);
      }
    }
  }
}

TEST_CASE("generator L") {
  auto h1 = [](const Vec& y) { return y[0]; };
  CHECK(l_apply(h1, {1.3}) == doctest::Approx(1.3).epsilon(1e-7));  // L h1 = h1
  auto constant = [](const Vec&) { return 4.2; };
  CHECK(l_apply(constant, {0.7, -0.2}) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  // L (sqrt(l!) h_l) = |l| sqrt(l!) h_l
  MultiIndex ell({2, 1});
  auto f = [&](const Vec& y) { return hermite_eval_multi_orthonormal(ell, y); };
  for (Vec x : {Vec{0.4, -0.9}, Vec{1.2, 0.8}}) {
    CHECK(l_apply(f, x) == doctest::Approx(3.0 * f(x)).scale(1.0).epsilon(1e-5));
  }
}

TEST_CASE("derivative of the noise operator") {
  auto constant = [](const Vec&) { return 1.0; };
  for (double rho : {0.0, 0.4, -0.6}) {
    CHECK(dt_drho(constant, rho, {1.0, 2.0}, grid2()) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  // d/drho T_rho (sqrt(l!) h_l) = m rho^{m-1} sqrt(l!) h_l
  MultiIndex ell({1, 2});
  auto f = [&](const Vec& y) { return hermite_eval_multi_orthonormal(ell, y); };
  for (double rho : {0.25, 0.6}) {
    for (Vec x : {Vec{0.3, 0.5}, Vec{-1.0, 1.1}}) {
      double expect = 3.0 * rho * rho * f(x);
      CHECK(dt_drho(f, rho, x, grid2()) == doctest::Approx(expect).scale(1.0).epsilon(1e-8));
      CHECK(dt_drho_l_route(f, rho, x, grid2()) ==
            doctest::Approx(expect).scale(1.0).epsilon(1e-4));
      // the two routes agree
      CHECK(std::abs(dt_drho(f, rho, x, grid2()) - dt_drho_l_route(f, rho, x, grid2())) <=
            1e-5);
    }
  }
  CHECK_THROWS_AS(dt_drho_l_route(f, 0.0, {0.0, 0.0}, grid2()), std::invalid_argument);
  // centered finite differences as the oracle, smooth function
  auto g = [](const Vec& y) { return std::exp(-0.5 * (y[0] * y[0] + 0.3 * y[1])); };
  for (double rho : {0.2, 0.5}) {
    Vec x{0.8, -0.4};
    double h = 1e-4;
    double fd = (t_rho_apply(g, rho + h, x, grid2()) - t_rho_apply(g, rho - h, x, grid2())) /
                (2.0 * h);
    CHECK(std::abs(dt_drho(g, rho, x, grid2()) - fd) <= 1e-4);
  }
}

TEST_CASE("derivative of sector indicators matches finite differences") {
  SectorCell half{false, 0.0, kPi};
  SectorCell narrow{false, 1.0, 2.2};
  for (const auto& cell : {half, narrow}) {
    for (double rho : {0.3, -0.3, 0.05}) {
      for (Vec x : {Vec{1.0, 0.7}, Vec{-0.4, 1.3}}) {
        double h = 1e-4;
        double fd =
            (t_rho_sector(cell, rho + h, x) - t_rho_sector(cell, rho - h, x)) / (2.0 * h);
        CHECK(std::abs(dt_drho_sector(cell, rho, x) - fd) <= 1e-4);
      }
    }
  }
}

TEST_CASE("noise stability closed values") {
  auto reg = ConicalPartition::regular(3, 2);
  auto j0 = noise_stability_J(reg, 0.0, JMethod::quadrature2d);
  CHECK(j0.value == doctest::Approx(1.0 / 3).epsilon(1e-10));
  auto j1 = noise_stability_J(reg, 1.0, JMethod::quadrature2d);
  CHECK(j1.value == doctest::Approx(1.0).epsilon(1e-12));
  // half-spaces: J = 1/2 + asin(rho)/pi
  auto halves = ConicalPartition::from_breakpoints({0.0, kPi});
  for (double rho : {0.1, 0.5, 0.9, -0.4}) {
    auto q = noise_stability_J(halves, rho, JMethod::quadrature2d);
    CHECK(q.value == doctest::Approx(0.5 + std::asin(rho) / kPi).epsilon(1e-9));
  }
  JOptions mo;
  mo.samples = 400000;
  mo.seed = 17;
  auto m = noise_stability_J(halves, 0.5, JMethod::montecarlo, mo);
  CHECK(std::abs(m.value - (0.5 + std::asin(0.5) / kPi)) <= 3.5 * m.error_estimate);
  CHECK(m.samples > 0);
  CHECK(m.seed == 17);
}

TEST_CASE("series method agrees with quadrature") {
  auto reg = ConicalPartition::regular(3, 2);
  RandomSource rng(71);
  auto skew = ConicalPartition::from_breakpoints({0.3, 2.0, 4.4});
  for (const auto& p : {reg, skew}) {
    for (double rho : {-0.3, 0.05, 0.3}) {
      auto q = noise_stability_J(p, rho, JMethod::quadrature2d);
      auto s = noise_stability_J(p, rho, JMethod::hermite_series);
      CHECK(std::abs(q.value - s.value) <= 1e-4);
      CHECK(s.error_estimate >= 0.0);
    }
  }
}

TEST_CASE("J is nondecreasing in rho and psi is nonnegative") {
  auto reg = ConicalPartition::regular(3, 2);
  double prev = -1.0;
  for (double rho = 0.0; rho <= 0.91; rho += 0.1) {
    double jv = noise_stability_J(reg, rho, JMethod::quadrature2d).value;
    CHECK(jv >= prev - 1e-9);
    prev = jv;
    if (rho < 0.9) CHECK(psi_rho(reg, rho, 32).value >= 0.0);
  }
}

TEST_CASE("cell coefficients") {
  auto reg = ConicalPartition::regular(3, 2);
  auto c0 = hermite_coefficients_of_cell(reg, 0, 6);
  // degree 0: the cell measure
  CHECK(c0.coefficient(MultiIndex({0, 0})) == doctest::Approx(1.0 / 3).epsilon(1e-10));
  // degree 1: the barycenter components
  Vec z = reg.barycenter(0);
  CHECK(c0.coefficient(MultiIndex({1, 0})) == doctest::Approx(z[0]).epsilon(1e-9));
  CHECK(c0.coefficient(MultiIndex({0, 1})) == doctest::Approx(z[1]).scale(1.0).epsilon(1e-9));
  // half-plane {x1 > 0}: even-degree pure-x1 coefficients vanish beyond 0
  auto halves = ConicalPartition::from_breakpoints({kPi / 2, 3 * kPi / 2});
  auto hc = hermite_coefficients_of_cell(halves, 1, 6);
  CHECK(std::abs(hc.coefficient(MultiIndex({2, 0}))) <= 1e-10);
  CHECK(std::abs(hc.coefficient(MultiIndex({4, 0}))) <= 1e-10);
  // MC path agrees within its standard error
  RandomSource rng(5);
  double err = 0.0;
  auto mc = hermite_coefficients_of_cell_mc(reg, 0, 3, rng, 200000, &err);
  for (const auto& [ell, a] : mc.coefficients()) {
    CHECK(std::abs(a - c0.coefficient(ell)) <= 6.0 * err + 1e-3);
  }
}

TEST_CASE("psi limits and finite-difference oracle") {
  auto reg = ConicalPartition::regular(3, 2);
  auto halves = ConicalPartition::from_breakpoints({0.0, kPi});
  CHECK(psi_rho(reg, 0.0, 12).value == doctest::Approx(9.0 / (8 * kPi)).epsilon(1e-10));
  CHECK(psi_rho(reg, 0.0, 12).value == doctest::Approx(reg.psi_zero()).epsilon(1e-10));
  CHECK(psi_rho(halves, 0.0, 12).value == doctest::Approx(1.0 / kPi).epsilon(1e-10));
  double h = 1e-4;
  for (double rho : {0.1, 0.25}) {
    double fd = (noise_stability_J(reg, rho + h, JMethod::quadrature2d).value -
                 noise_stability_J(reg, rho - h, JMethod::quadrature2d).value) /
                (2.0 * h);
    CHECK(std::abs(psi_rho(reg, rho, 28).value - fd) <= 1e-4);
  }
  // truncation too small is reported, not silently accepted
  auto coarse = psi_rho(reg, 0.6, 4);
  CHECK(!coarse.converged);
  CHECK(coarse.tail_bound > 1e-9);
  auto fine = psi_rho(reg, 0.05, 16);
  CHECK(fine.converged);
}

TEST_CASE("volume term and cone moments") {
  RandomSource rng(8);
  // the cone moment vanishes at the apex shift for any sector
  for (int t = 0; t < 20; ++t) {
    double lo = rng.uniform(0.0, kTwoPi);
    double w = rng.uniform(0.1, kTwoPi - 0.1);
    SectorCell c{false, lo, lo + w};
    CHECK(std::abs(volume_term_sector(c, 0.37, {0.0, 0.0})) <= 1e-8);
  }
  // and in dimension 3 by Monte Carlo over a non-planar cone
  auto p3 = ConicalPartition::from_generators(
      {{1.0, 0.1, 0.0}, {-0.4, 0.9, 0.2}, {-0.3, -0.8, 0.5}});
  RandomSource mc(9);
  double acc = 0.0, acc_sq = 0.0;
  const int N = 400000;
  for (int s = 0; s < N; ++s) {
    Vec y = mc.gaussian_vec(3);
    if (p3.classify(y) == 1) {
      double v = 3.0 - dot(y, y);
      acc += v;
      acc_sq += v * v;
    }
  }
  double mean = acc / N;
  double se = std::sqrt((acc_sq / N - mean * mean) / N);
  CHECK(std::abs(mean) <= 4.0 * se);
}

TEST_CASE("volume term symmetry on the shared boundary") {
  // the configuration with two mirror cells across the x2-axis: the volume
  // term of the indicator difference vanishes for x with x1 = 0
  auto p = ConicalPartition::from_breakpoints({0.5 * kPi, 7.0 * kPi / 6.0, 11.0 * kPi / 6.0});
  auto cells = p.sector_cells();
  for (double x2 : {0.5, 1.5, 3.0}) {
    double vi = volume_term_sector(cells[2], 0.2, {0.0, x2});
    double vj = volume_term_sector(cells[0], 0.2, {0.0, x2});
    CHECK(std::abs(vi - vj) <= 1e-10);
  }
}

TEST_CASE("volume term sign far out along the cell") {
  // for x in B_i with x1 > sqrt(n) sqrt(1-rho^2)/rho the difference of volume
  // terms is nonnegative
  auto p = ConicalPartition::from_breakpoints({0.5 * kPi, 7.0 * kPi / 6.0, 11.0 * kPi / 6.0});
  auto cells = p.sector_cells();
  double rho = 0.5;
  double threshold = std::sqrt(2.0) * std::sqrt(1.0 - rho * rho) / rho;
  for (double x1 : {threshold + 0.5, threshold + 2.0}) {
    for (double x2 : {0.2, 1.0}) {
      Vec x{x1, x2};
      if (p.classify(x) != 2) continue;
      double diff = volume_term_sector(cells[2], rho, x) - volume_term_sector(cells[0], rho, x);
      CHECK(diff >= -1e-8);
    }
  }
}

TEST_CASE("lt difference routes cross-validate") {
  auto reg = ConicalPartition::regular(3, 2);
  RandomSource rng(3);
  for (int t = 0; t < 30; ++t) {
    Vec x{rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)};
    double rho = rng.uniform(0.02, 0.6) * (t % 2 == 0 ? 1.0 : -1.0);
    auto d = lt_rho_difference(reg, 0, 1, rho, x);
    CHECK(std::abs(d.boundary - d.integral) <= 1e-3);
  }
  CHECK_THROWS_AS(lt_rho_difference(reg, 1, 1, 0.3, Vec{1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("invalid inputs") {
  auto bad = [](const Vec& y) { return y[0] > 0 ? 1e308 * 1e308 : 0.0; };
  CHECK_THROWS_AS(t_rho_apply(bad, 0.3, Vec{0.0, 0.0}, grid2()), std::domain_error);
  CHECK_THROWS_AS(CorrelationParam(1.5), std::invalid_argument);
  auto reg = ConicalPartition::regular(3, 2);
  CHECK_THROWS_AS(noise_stability_J(reg, 1.5, JMethod::quadrature2d), std::invalid_argument);
  auto p3 = ConicalPartition::from_generators(
      {{1.0, 0.1, 0.2}, {-0.4, 0.9, 0.2}, {-0.3, -0.8, 0.5}});
  CHECK_THROWS_AS(noise_stability_J(p3, 0.3, JMethod::quadrature2d), method_unavailable);
  CHECK_THROWS_AS(hermite_coefficients_of_cell(p3, 0, 4), method_unavailable);
  // J of a partition stays in [0, 1]
  for (double rho : {-0.9, -0.3, 0.2, 0.8}) {
    double jv = noise_stability_J(reg, rho, JMethod::quadrature2d).value;
    CHECK(jv >= 0.0);
    CHECK(jv <= 1.0);
  }
}

TEST_CASE("result serialization") {
  auto reg = ConicalPartition::regular(3, 2);
  JOptions mo;
  mo.samples = 1000;
  mo.seed = 3;
  auto r = noise_stability_J(reg, 0.2, JMethod::montecarlo, mo);
  auto j = r.to_json();
  CHECK(j.find("montecarlo") != std::string::npos);
  CHECK(j.find("seed") != std::string::npos);
}

TEST_SUITE_END();
