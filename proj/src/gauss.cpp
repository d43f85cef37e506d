#include "gns/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gns {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bivariate_normal_upper(double h, double k, double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw std::invalid_argument("correlation outside [-1,1]");
  if (r >= 1.0) return 1.0 - normal_cdf(std::max(h, k));
  if (r <= -1.0) return std::max(0.0, normal_cdf(-k) - normal_cdf(h));
  double base = (1.0 - normal_cdf(h)) * (1.0 - normal_cdf(k));
  if (r == 0.0) return base;
  // (1/2pi) int_0^{asin r} exp(-(h^2 - 2hk sin t + k^2)/(2 cos^2 t)) dt
  static thread_local Vec nodes, weights;
  if (nodes.empty()) gauss_legendre(96, 0.0, 1.0, nodes, weights);
  double upper = std::asin(r);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double t = upper * nodes[i];
    double c = std::cos(t);
    double e = std::exp(-(h * h - 2.0 * h * k * std::sin(t) + k * k) / (2.0 * c * c));
    s += weights[i] * e;
  }
  return base + upper * s / kTwoPi;
}

void gauss_legendre(int m, double a, double b, Vec& nodes, Vec& weights) {
  if (m < 1) throw std::invalid_argument("gauss_legendre: m < 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  int half = (m + 1) / 2;
  double xm = 0.5 * (b + a);
  double xl = 0.5 * (b - a);
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = m * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = xm - xl * z;
    nodes[m - 1 - i] = xm + xl * z;
    weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    weights[m - 1 - i] = weights[i];
  }
}

const std::pair<Vec, Vec>& gauss_legendre_unit(int m) {
  static thread_local std::map<int, std::pair<Vec, Vec>> cache;
  auto& rule = cache[m];
  if (rule.first.empty()) gauss_legendre(m, 0.0, 1.0, rule.first, rule.second);
  return rule;
}

void gauss_laguerre(int m, Vec& nodes, Vec& weights) {
  if (m < 1) throw std::invalid_argument("gauss_laguerre: m < 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * m);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * m);
    } else {
      double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2]);
    }
    double pp = 0.0, p2 = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = 1.0;
      p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0 - z) * p2 - j * p3) / (j + 1.0);
      }
      pp = m * (p1 - p2) / z;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, z)) break;
    }
    nodes[i] = z;
    weights[i] = -1.0 / (pp * m * p2);
  }
}

void gauss_hermite_gamma(int m, Vec& nodes, Vec& weights) {
  if (m < 1) throw std::invalid_argument("gauss_hermite_gamma: m < 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  int half = (m + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(m), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * nodes[1];
    } else {
      z = 2.0 * z - nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    // nodes for weight e^{-t^2}; rescale to gamma_1 below
    nodes[i] = z;
    nodes[m - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[m - 1 - i] = weights[i];
  }
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  for (int i = 0; i < m; ++i) {
    nodes[i] *= std::sqrt(2.0);
    weights[i] *= inv_sqrt_pi;
  }
}

QuadratureGrid QuadratureGrid::tensor(int n, int m) {
  if (n < 1) throw std::invalid_argument("tensor grid: n < 1");
  Vec nodes, weights;
  gauss_hermite_gamma(m, nodes, weights);
  QuadratureGrid g;
  g.dimension = n;
  g.scheme = GridScheme::tensor_gauss_hermite;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= nodes.size();
  g.points.reserve(total);
  g.weights.reserve(total);
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec p(n);
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      p[i] = nodes[idx[i]];
      w *= weights[idx[i]];
    }
    g.points.push_back(std::move(p));
    g.weights.push_back(w);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
    if (k < 0) break;
  }
  return g;
}

QuadratureGrid QuadratureGrid::polar2d(int radial, int angular) {
  Vec u, wu;
  gauss_laguerre(radial, u, wu);
  QuadratureGrid g;
  g.dimension = 2;
  g.scheme = GridScheme::polar_2d;
  g.points.reserve(static_cast<std::size_t>(radial) * angular);
  g.weights.reserve(static_cast<std::size_t>(radial) * angular);
  for (int i = 0; i < radial; ++i) {
    double r = std::sqrt(2.0 * u[i]);
    for (int j = 0; j < angular; ++j) {
      double t = kTwoPi * (j + 0.5) / angular;
      g.points.push_back({r * std::cos(t), r * std::sin(t)});
      g.weights.push_back(wu[i] / angular);
    }
  }
  return g;
}

double QuadratureGrid::integrate(const std::function<double(const Vec&)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
  return s;
}

std::pair<Vec, Vec> sample_correlated_pair(const CorrelationParam& rho, int n,
                                           RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("sample_correlated_pair: n < 1");
  Vec x = rng.gaussian_vec(n);
  double c = std::sqrt(std::max(0.0, 1.0 - rho.rho * rho.rho));
  Vec y(n);
  for (int i = 0; i < n; ++i) y[i] = rho.rho * x[i] + c * rng.gaussian();
  return {std::move(x), std::move(y)};
}

double gaussian_measure_sector(double angle_lo, double angle_hi) {
  double width = angle_hi - angle_lo;
  if (width < 0.0) throw std::invalid_argument("gaussian_measure_sector: negative width");
  if (width > kTwoPi + 1e-12) throw std::invalid_argument("gaussian_measure_sector: width > 2pi");
  return std::min(width, kTwoPi) / kTwoPi;
}

AffinePiece AffinePiece::make_hyperplane(Vec normal) {
  double n = norm2(normal);
  if (n < 1e-12) throw std::invalid_argument("AffinePiece: zero normal");
  for (auto& v : normal) v /= n;
  return AffinePiece{hyperplane, std::move(normal), {}};
}

AffinePiece AffinePiece::make_half_hyperplane(Vec normal, Vec edge_dir) {
  double n = norm2(normal), e = norm2(edge_dir);
  if (n < 1e-12 || e < 1e-12) throw std::invalid_argument("AffinePiece: zero direction");
  for (auto& v : normal) v /= n;
  for (auto& v : edge_dir) v /= e;
  if (std::abs(dot(normal, edge_dir)) > 1e-10)
    throw std::invalid_argument("AffinePiece: edge_dir not orthogonal to normal");
  return AffinePiece{half_hyperplane, std::move(normal), std::move(edge_dir)};
}

double gaussian_surface_measure_shifted(const AffinePiece& piece, const Vec& shift,
                                        double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("surface measure: scale must be positive");
  if (piece.normal.size() != shift.size())
    throw std::invalid_argument("surface measure: dimension mismatch");
  double offset = dot(shift, piece.normal) / scale;
  double density = normal_pdf(offset);
  if (piece.kind == AffinePiece::hyperplane) return density;
  return density * normal_cdf(dot(shift, piece.edge_dir) / scale);
}

namespace {

// int_a^b |y|^p dgamma_1 by Gauss-Legendre; b may be effectively infinite.
double moment_on_interval(double a, double b, int p) {
  b = std::min(b, std::max(a, 0.0) + 16.0);
  if (b <= a) return 0.0;
  static thread_local Vec nodes, weights;
  if (nodes.empty()) gauss_legendre(80, 0.0, 1.0, nodes, weights);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double y = a + (b - a) * nodes[i];
    s += weights[i] * std::pow(std::abs(y), p) * normal_pdf(y);
  }
  return (b - a) * s;
}

double radial_tail_integral(double t, double power) {
  // int_t^inf r^power e^{-r^2/2} dr
  double b = t + 16.0;
  static thread_local Vec nodes, weights;
  if (nodes.empty()) gauss_legendre(120, 0.0, 1.0, nodes, weights);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double r = t + (b - t) * nodes[i];
    s += weights[i] * std::pow(r, power) * std::exp(-0.5 * r * r);
  }
  return (b - t) * s;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

std::pair<double, double> tail_moment_bounds(double eta, double t, int n,
                                             TailRegion region) {
  if (!(eta > 0.0) || !(t > 0.0) || n < 2)
    throw std::invalid_argument("tail_moment_bounds: need eta > 0, t > 0, n >= 2");
  double lhs = 0.0;
  // enumerate l in N^n with |l| <= 3
  std::vector<int> ell(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n) {
      // even integrands: fold the symmetric intervals onto [0, b]
      double term = 2.0 * moment_on_interval(0.0, eta, ell[0]);
      term *= moment_on_interval(t, 1e30, ell[1]);
      for (int i = 2; i < n; ++i) term *= 2.0 * moment_on_interval(0.0, 16.0, ell[i]);
      lhs += term;
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      ell[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  double rhs;
  if (region == TailRegion::slab) {
    rec(0, 3);
    rhs = 3000.0 * n * n * n * eta * (t * t + 2.0) * std::exp(-0.5 * t * t);
  } else {
    // spherical monomial integral in closed form, radial tail by quadrature
    std::function<void(int, int)> rec_ball = [&](int pos, int remaining) {
      if (pos == n) {
        int deg = 0;
        double log_s = std::log(2.0) - 0.5 * n * std::log(kTwoPi);
        for (int i = 0; i < n; ++i) {
          deg += ell[i];
          log_s += std::lgamma((ell[i] + 1.0) / 2.0);
        }
        log_s -= std::lgamma((n + deg) / 2.0);
        lhs += std::exp(log_s) * radial_tail_integral(t, n - 1.0 + deg);
        return;
      }
      for (int v = 0; v <= remaining; ++v) {
        ell[pos] = v;
        rec_ball(pos + 1, remaining - v);
      }
    };
    rec_ball(0, 3);
    rhs = 100.0 * factorial(n + 2) * (std::pow(t, n + 1.0) + 1.0) * std::exp(-0.5 * t * t);
  }
  return {lhs, rhs};
}

}  // namespace gns
