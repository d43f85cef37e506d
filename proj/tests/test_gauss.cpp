#include <doctest.h>

#include <cmath>

#include "gns/gauss.hpp"
#include "gns/rng.hpp"

using namespace gns;

TEST_SUITE_BEGIN("gauss");

TEST_CASE("sampler reproducibility") {
  RandomSource a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    double va = a.gaussian(), vb = b.gaussian(), vc = c.gaussian();
    all_equal = all_equal && (va == vb);
    any_diff = any_diff || (va != vc);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("correlated pair marginals and covariance") {
  RandomSource rng(2024);
  const int N = 1000000;
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  CorrelationParam rho(0.6);
  for (int i = 0; i < N; ++i) {
    auto [x, y] = sample_correlated_pair(rho, 2, rng);
    sxy += x[0] * y[0];
    sx += x[0];
    sy += y[0];
    sxx += x[0] * x[0];
    syy += y[0] * y[0];
  }
  CHECK(sxy / N == doctest::Approx(0.6).epsilon(0.00667));  // 0.6 +- 0.004
  CHECK(sx / N == doctest::Approx(0.0).scale(1).epsilon(0.004));
  CHECK(sy / N == doctest::Approx(0.0).scale(1).epsilon(0.004));
  CHECK(sxx / N == doctest::Approx(1.0).epsilon(0.005));
  CHECK(syy / N == doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("correlated pair degenerate cases") {
  RandomSource rng(9);
  auto [x, y] = sample_correlated_pair(CorrelationParam(1.0), 3, rng);
  for (int i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-15));
  double s = 0.0;
  const int N = 1000000;
  for (int i = 0; i < N; ++i) {
    auto [u, v] = sample_correlated_pair(CorrelationParam(0.0), 1, rng);
    s += u[0] * v[0];
  }
  CHECK(std::abs(s / N) <= 3.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("sector measure") {
  CHECK(gaussian_measure_sector(0.0, kTwoPi) == doctest::Approx(1.0));
  CHECK(gaussian_measure_sector(0.3, 0.3 + kTwoPi / 3) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(gaussian_measure_sector(-1.0, kPi - 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_measure_sector(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("quadrature rules integrate exactly") {
  // per-axis polynomial exactness up to degree 2m-1 against Gaussian moments
  for (int m : {5, 13, 40}) {
    Vec nodes, weights;
    gauss_hermite_gamma(m, nodes, weights);
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    for (int d = 0; d <= 2 * m - 1; ++d) {
      double q = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        q += weights[i] * std::pow(nodes[i], d);
        scale += weights[i] * std::pow(std::abs(nodes[i]), d);
      }
      double exact = 0.0;  // E[Z^d] = (d-1)!! for even d
      if (d % 2 == 0) {
        exact = 1.0;
        for (int t = d - 1; t >= 2; t -= 2) exact *= t;
      }
      CHECK(std::abs(q - exact) <= 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("legendre and laguerre rules") {
  Vec n1, w1;
  gauss_legendre(24, -1.5, 2.0, n1, w1);
  double s = 0.0;
  for (std::size_t i = 0; i < n1.size(); ++i) s += w1[i] * std::exp(n1[i]);
  CHECK(s == doctest::Approx(std::exp(2.0) - std::exp(-1.5)).epsilon(1e-13));
  Vec n2, w2;
  gauss_laguerre(32, n2, w2);
  double t = 0.0, u = 0.0;
  for (std::size_t i = 0; i < n2.size(); ++i) {
    t += w2[i];
    u += w2[i] * n2[i] * n2[i] * n2[i];
  }
  CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("tensor grid normalizes") {
  auto g = QuadratureGrid::tensor(3, 8);
  double s = 0.0;
  for (double w : g.weights) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  double v = g.integrate([](const Vec& x) { return x[0] * x[0] + x[1] * x[1] * x[2] * x[2]; });
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("polar grid integrates radial functions") {
  auto g = QuadratureGrid::polar2d(64, 128);
  double s = 0.0;
  for (double w : g.weights) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  double v = g.integrate([](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; });
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("bivariate normal quadrant identity") {
  for (double r : {-0.95, -0.5, 0.0, 0.3, 0.8, 0.99}) {
    CHECK(bivariate_normal_upper(0.0, 0.0, r) ==
          doctest::Approx(0.25 + std::asin(r) / kTwoPi).epsilon(1e-12));
  }
  CHECK(bivariate_normal_upper(0.7, -0.2, 0.0) ==
        doctest::Approx((1 - normal_cdf(0.7)) * (1 - normal_cdf(-0.2))).epsilon(1e-13));
  CHECK(bivariate_normal_upper(0.5, 1.0, 1.0) == doctest::Approx(1 - normal_cdf(1.0)));
}

TEST_CASE("surface measure closed forms") {
  auto plane = AffinePiece::make_hyperplane({1.0, 0.0, 0.0});
  CHECK(gaussian_surface_measure_shifted(plane, {0, 0, 0}, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(1e-14));
  for (double t : {0.4, 1.7}) {
    CHECK(gaussian_surface_measure_shifted(plane, {t, 0.3, -2.0}, 1.0) ==
          doctest::Approx(std::exp(-0.5 * t * t) / std::sqrt(kTwoPi)).epsilon(1e-14));
  }
  auto half = AffinePiece::make_half_hyperplane({1.0, 0.0}, {0.0, 1.0});
  CHECK(gaussian_surface_measure_shifted(half, {0.0, 0.0}, 1.0) ==
        doctest::Approx(0.5 / std::sqrt(kTwoPi)).epsilon(1e-14));
  // scaling: gamma(delta_{A/s}) for the through-origin half-plane is scale-free
  CHECK(gaussian_surface_measure_shifted(half, {0.0, 0.0}, 0.5) ==
        doctest::Approx(0.5 / std::sqrt(kTwoPi)).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_surface_measure_shifted(half, {0.0, 0.0}, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(AffinePiece::make_half_hyperplane({1.0, 0.0}, {0.5, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("surface measure thin-slab oracle") {
  // gamma_2(delta_A) for the half-line {x1=0, x2>=0}: (1/2 delta) gamma{dist < delta}
  auto half = AffinePiece::make_half_hyperplane({1.0, 0.0}, {0.0, 1.0});
  Vec shift{0.35, -0.2};
  double scale = 0.9;
  RandomSource rng(512);
  const double delta = 2e-3;
  const int N = 4000000;
  int hits = 0;
  for (int i = 0; i < N; ++i) {
    double x = rng.gaussian(), y = rng.gaussian();
    // distance from (x, y) to the shifted/scaled half-line {x1 = -a, x2 >= b}
    double px = (0.0 - shift[0]) / scale;
    double qy = (0.0 - shift[1]) / scale;
    double dx = x - px;
    double dy = (y >= qy) ? 0.0 : y - qy;
    if (dx * dx + dy * dy < delta * delta) ++hits;
  }
  double est = hits / (2.0 * delta * N);
  double exact = gaussian_surface_measure_shifted(half, shift, scale);
  CHECK(est == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("tail moment bounds hold on the grid") {
  for (double eta : {0.01, 0.1, 0.5}) {
    for (double t : {1.0, 2.0, 4.0}) {
      for (int n : {2, 3, 4}) {
        auto [lhs, rhs] = tail_moment_bounds(eta, t, n, TailRegion::slab);
        CHECK(lhs >= 0.0);
        CHECK(lhs <= rhs);
        auto [lhs2, rhs2] = tail_moment_bounds(eta, t, n, TailRegion::ball_complement);
        CHECK(lhs2 >= 0.0);
        CHECK(lhs2 <= rhs2);
      }
    }
  }
}

TEST_CASE("tail moment slab vanishes with eta") {
  auto [lhs0, rhs0] = tail_moment_bounds(0.1, 3.0, 2, TailRegion::slab);
  CHECK(lhs0 <= rhs0);
  auto [lhs1, rhs1] = tail_moment_bounds(1e-6, 3.0, 2, TailRegion::slab);
  CHECK(lhs1 <= 1e-5);
  CHECK(rhs1 > 0.0);
  // closed rhs value at (t=5, n=3), ball case
  auto [lhs2, rhs2] = tail_moment_bounds(0.1, 5.0, 3, TailRegion::ball_complement);
  CHECK(rhs2 == doctest::Approx(100.0 * 120.0 * (std::pow(5.0, 4) + 1) * std::exp(-12.5))
                    .epsilon(1e-12));
  CHECK(lhs2 <= rhs2);
}

TEST_CASE("substreams differ and are reproducible") {
  RandomSource master(77);
  auto s1 = master.substream(0);
  auto s2 = master.substream(1);
  auto s1b = master.substream(0);
  CHECK(s1.gaussian() == s1b.gaussian());
  CHECK(s1.seed() != s2.seed());
}

TEST_SUITE_END();
