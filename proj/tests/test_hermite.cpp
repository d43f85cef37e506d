#include <doctest.h>

#include <cmath>

#include "gns/gauss.hpp"
#include "gns/hermite.hpp"
#include "gns/rng.hpp"
#include "oracles.hpp"

using namespace gns;

TEST_SUITE_BEGIN("hermite");

TEST_CASE("first polynomials") {
  CHECK(hermite_eval(0, 3.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hermite_eval(1, 3.7) == doctest::Approx(3.7).epsilon(1e-15));
  // h_2(x) = x^2/2 - 1/2 vanishes at 1 (value frozen from the closed-sum oracle)
  CHECK(testing::hermite_eval_sum(2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(hermite_eval(2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("recurrence matches closed sum") {
  for (int ell = 0; ell <= 20; ++ell) {
    for (double x : {-8.0, -3.1, -0.5, 0.0, 0.7, 2.3, 5.9, 8.0}) {
      double ref = testing::hermite_eval_sum(ell, x);
      double got = hermite_eval(ell, x);
      CHECK(got == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("stable at high degree and large argument") {
  // the closed sum loses all digits here; the recurrence must stay finite and
  // satisfy the normalized-growth sanity bound
  for (double x : {-12.0, -7.5, 0.3, 12.0}) {
    double v = hermite_eval_orthonormal(60, x);
    CHECK(std::isfinite(v));
    CHECK(std::isfinite(hermite_eval(60, x)));
    MultiIndex ell({60});
    CHECK(std::abs(v) <= hermite_growth_bound(ell, {x}));
    // the two normalizations are consistent: h_l sqrt(l!) in log space
    double log_ratio = 0.5 * ell.log_factorial();
    if (std::abs(hermite_eval(60, x)) > 1e-280) {
      CHECK(std::log(std::abs(v)) ==
            doctest::Approx(std::log(std::abs(hermite_eval(60, x))) + log_ratio).epsilon(1e-9));
    }
  }
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(hermite_eval(-1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hermite_eval(3, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(hermite_eval_multi(MultiIndex({1, 2}), {1.0}), std::invalid_argument);
}

TEST_CASE("multi-index evaluation") {
  CHECK(hermite_eval_multi(MultiIndex({0, 0}), {5.0, -2.0}) == doctest::Approx(1.0));
  RandomSource rng(11);
  for (int t = 0; t < 20; ++t) {
    double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    CHECK(hermite_eval_multi(MultiIndex({1, 1}), {a, b}) == doctest::Approx(a * b).epsilon(1e-12));
  }
  CHECK(hermite_eval_multi(MultiIndex({2, 1}), {1.0, 2.0}) == doctest::Approx(0.0));
}

TEST_CASE("norms") {
  CHECK(hermite_norm_sq(MultiIndex({0})) == doctest::Approx(1.0));
  CHECK(hermite_norm_sq(MultiIndex({3})) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  // 2-D quadrature oracle for 1/l!
  Vec nodes, weights;
  gauss_hermite_gamma(40, nodes, weights);
  double q = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      double h = hermite_eval(2, nodes[i]) * hermite_eval(2, nodes[j]);
      q += weights[i] * weights[j] * h * h;
    }
  CHECK(hermite_norm_sq(MultiIndex({2, 2})) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(q == doctest::Approx(0.25).epsilon(1e-10));
  // log accessor consistency
  CHECK(hermite_log_norm_sq(MultiIndex({3, 2})) ==
        doctest::Approx(std::log(hermite_norm_sq(MultiIndex({3, 2})))).epsilon(1e-13));
}

TEST_CASE("growth bound closed values") {
  CHECK(hermite_growth_bound(MultiIndex({1}), {0.5}) == doctest::Approx(3.0));
  CHECK(hermite_growth_bound(MultiIndex({2, 0}), {2.0, 0.0}) == doctest::Approx(144.0));
  CHECK(hermite_growth_bound(MultiIndex({1, 1}), {1.0, 1.0}) == doctest::Approx(36.0));
}

TEST_CASE("growth bound dominates the normalized polynomials") {
  RandomSource rng(7);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform_index(4));
    int total = 1 + static_cast<int>(rng.uniform_index(30));
    std::vector<int> e(n, 0);
    for (int d = 0; d < total; ++d) e[rng.uniform_index(n)]++;
    MultiIndex ell(e);
    Vec x(n);
    for (auto& v : x) v = rng.uniform(-6.0, 6.0);
    double val = std::abs(hermite_eval_multi_orthonormal(ell, x));
    CHECK(val <= hermite_growth_bound(ell, x) * (1 + 1e-12));
  }
}

TEST_CASE("orthonormality under tensor quadrature") {
  Vec nodes, weights;
  gauss_hermite_gamma(40, nodes, weights);
  int m = static_cast<int>(nodes.size());
  for (int n = 1; n <= 3; ++n) {
    auto idx = MultiIndex::up_to_degree(n, 6);
    std::size_t cnt = idx.size();
    std::vector<double> gram(cnt * cnt, 0.0);
    std::vector<int> grid(n, 0);
    std::vector<double> vals(cnt);
    for (;;) {
      Vec x(n);
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        x[i] = nodes[grid[i]];
        w *= weights[grid[i]];
      }
      for (std::size_t a = 0; a < cnt; ++a) vals[a] = hermite_eval_multi_orthonormal(idx[a], x);
      for (std::size_t a = 0; a < cnt; ++a)
        for (std::size_t b = a; b < cnt; ++b) gram[a * cnt + b] += w * vals[a] * vals[b];
      int c = n - 1;
      while (c >= 0 && ++grid[c] == m) grid[c--] = 0;
      if (c < 0) break;
    }
    for (std::size_t a = 0; a < cnt; ++a)
      for (std::size_t b = a; b < cnt; ++b) {
        double expected = (a == b) ? 1.0 : 0.0;
        CHECK(gram[a * cnt + b] == doctest::Approx(expected).epsilon(1e-8));
      }
  }
}

TEST_CASE("generating function partial sums") {
  for (double lambda : {0.3, 0.9}) {
    for (double x : {-4.0, -1.2, 0.0, 2.8, 4.0}) {
      double s = 0.0, pw = 1.0;
      for (int ell = 0; ell <= 40; ++ell) {
        s += pw * hermite_eval(ell, x);
        pw *= lambda;
      }
      CHECK(s == doctest::Approx(std::exp(lambda * x - 0.5 * lambda * lambda)).epsilon(1e-8));
    }
  }
}

TEST_CASE("series container") {
  HermiteSeries f(2, 4);
  f.set(MultiIndex({1, 0}), 2.0);
  f.set(MultiIndex({0, 2}), -1.0);
  CHECK(f.coefficient(MultiIndex({1, 0})) == 2.0);
  CHECK(f.coefficient(MultiIndex({3, 0})) == 0.0);
  CHECK(f.mass() == doctest::Approx(5.0));
  // f(x) = 2 x_1 - H~_2(x_2), H~_2(y) = (y^2-1)/sqrt(2)
  Vec x{0.5, 1.5};
  double expected = 2.0 * 0.5 - (1.5 * 1.5 - 1.0) / std::sqrt(2.0);
  CHECK(f.evaluate(x) == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(f.set(MultiIndex({5, 0}), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f.set(MultiIndex({1}), 1.0), std::invalid_argument);
  // canonical iteration order: degree then lexicographic
  auto it = f.coefficients().begin();
  CHECK(it->first == MultiIndex({1, 0}));
}

TEST_SUITE_END();
