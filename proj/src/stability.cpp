#include "gns/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace gns {

std::string to_string(JMethod m) {
  switch (m) {
    case JMethod::montecarlo: return "montecarlo";
    case JMethod::quadrature2d: return "quadrature2d";
    case JMethod::hermite_series: return "hermite_series";
  }
  return "?";
}

std::string StabilityResult::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["method"] = to_string(method);
  j["error_estimate"] = error_estimate;
  nlohmann::json params;
  if (method == JMethod::montecarlo) {
    params["samples"] = samples;
    j["seed"] = seed;
  }
  if (method == JMethod::hermite_series) params["degree"] = degree;
  j["params"] = params;
  return j.dump();
}

double t_rho_apply(const ScalarField& f, double rho, const Vec& x,
                   const QuadratureGrid& grid) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("t_rho_apply: |rho| > 1");
  if (rho == 1.0) return f(x);
  if (rho == -1.0) return f(-1.0 * x);
  if (static_cast<int>(x.size()) != grid.dimension)
    throw std::invalid_argument("t_rho_apply: dimension mismatch");
  double s = std::sqrt(1.0 - rho * rho);
  double acc = 0.0;
  Vec z(x.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const Vec& y = grid.points[i];
    for (std::size_t d = 0; d < z.size(); ++d) z[d] = rho * x[d] + s * y[d];
    acc += grid.weights[i] * f(z);
  }
  if (!std::isfinite(acc)) throw std::domain_error("t_rho_apply: non-integrable function");
  return acc;
}

double l_apply(const ScalarField& f, const Vec& x, double step) {
  double h = step > 0.0 ? step : 1e-4 * std::max(1.0, norm2(x));
  double fx = f(x);
  double lap = 0.0, drift = 0.0;
  Vec xp = x, xm = x;
  for (std::size_t d = 0; d < x.size(); ++d) {
    xp[d] = x[d] + h;
    xm[d] = x[d] - h;
    double fp = f(xp), fm = f(xm);
    lap += (fp - 2.0 * fx + fm) / (h * h);
    drift += x[d] * (fp - fm) / (2.0 * h);
    xp[d] = x[d];
    xm[d] = x[d];
  }
  return -lap + drift;
}

double dt_drho(const ScalarField& f, double rho, const Vec& x,
               const QuadratureGrid& grid) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("dt_drho: |rho| < 1 required");
  if (static_cast<int>(x.size()) != grid.dimension)
    throw std::invalid_argument("dt_drho: dimension mismatch");
  double s = std::sqrt(1.0 - rho * rho);
  double first = 0.0, second = 0.0;
  Vec z(x.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const Vec& y = grid.points[i];
    double ysq = 0.0, xy = 0.0;
    for (std::size_t d = 0; d < z.size(); ++d) {
      z[d] = rho * x[d] + s * y[d];
      ysq += y[d] * y[d];
      xy += x[d] * y[d];
    }
    double fv = grid.weights[i] * f(z);
    first += xy * fv;
    second += (static_cast<double>(x.size()) - ysq) * fv;
  }
  return (first + rho / s * second) / s;
}

double dt_drho_l_route(const ScalarField& f, double rho, const Vec& x,
                       const QuadratureGrid& grid, double step) {
  if (rho == 0.0)
    throw std::invalid_argument("dt_drho_l_route: rho = 0 (use the integral form)");
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("dt_drho_l_route: |rho| < 1 required");
  auto trho = [&](const Vec& q) { return t_rho_apply(f, rho, q, grid); };
  return l_apply(trho, x, step) / rho;
}

// --- wedge machinery ---------------------------------------------------------

namespace {

struct Wedge {
  double ax, ay;  // apex
  double lo, hi;  // direction interval, hi - lo in (0, 2pi]
};

double wedge_measure(const Wedge& w) {
  double width = w.hi - w.lo;
  if (width <= 1e-14) return 0.0;
  if (width >= kTwoPi - 1e-14) return 1.0;
  if (std::abs(width - kPi) < 1e-12) {
    double nx = std::cos(w.lo + 0.5 * kPi), ny = std::sin(w.lo + 0.5 * kPi);
    return 1.0 - normal_cdf(w.ax * nx + w.ay * ny);
  }
  if (width < kPi) {
    double n1x = std::cos(w.lo + 0.5 * kPi), n1y = std::sin(w.lo + 0.5 * kPi);
    double n2x = std::cos(w.hi - 0.5 * kPi), n2y = std::sin(w.hi - 0.5 * kPi);
    double r = n1x * n2x + n1y * n2y;
    return bivariate_normal_upper(w.ax * n1x + w.ay * n1y, w.ax * n2x + w.ay * n2y, r);
  }
  return 1.0 - wedge_measure(Wedge{w.ax, w.ay, w.hi, w.lo + kTwoPi});
}

int angular_nodes(const Wedge& w) {
  double a = std::hypot(w.ax, w.ay);
  int n = 64 + 12 * static_cast<int>(std::ceil((w.hi - w.lo) * (1.0 + a)));
  return std::min(n, 400);
}

// int_0^inf (...) r dr closed forms along the ray at angle t from the apex
struct RadialMoments {
  double r0;  // weight 1
  double r1;  // weight r
  double q;   // weight (2 - |y|^2)
};

RadialMoments radial_moments(const Wedge& w, double t) {
  double ux = std::cos(t), uy = std::sin(t);
  double b = w.ax * ux + w.ay * uy;
  double csq = std::max(0.0, w.ax * w.ax + w.ay * w.ay - b * b);
  double m0 = std::sqrt(kTwoPi) * (1.0 - normal_cdf(b));
  double m1 = std::exp(-0.5 * b * b);
  double e = std::exp(-0.5 * csq) / kTwoPi;
  RadialMoments rm;
  rm.r0 = e * (m1 - b * m0);
  rm.r1 = e * ((1.0 + b * b) * m0 - b * m1);
  rm.q = e * ((csq - 1.0) * b * m0 - csq * m1);
  return rm;
}

struct WedgeMoments {
  double measure;
  double fm_x, fm_y;  // int y 1_W dgamma
  double quad;        // int (2 - |y|^2) 1_W dgamma
};

WedgeMoments wedge_moments(const Wedge& w) {
  WedgeMoments out{0, 0, 0, 0};
  double width = w.hi - w.lo;
  if (width <= 1e-14) return out;
  int n = angular_nodes(w);
  const auto& [nodes, weights] = gauss_legendre_unit(n);
  for (int i = 0; i < n; ++i) {
    double t = w.lo + width * nodes[i];
    double wt = width * weights[i];
    RadialMoments rm = radial_moments(w, t);
    out.measure += wt * rm.r0;
    out.fm_x += wt * (w.ax * rm.r0 + std::cos(t) * rm.r1);
    out.fm_y += wt * (w.ay * rm.r0 + std::sin(t) * rm.r1);
    out.quad += wt * rm.q;
  }
  return out;
}

Wedge shifted_wedge(const SectorCell& cell, double rho, const Vec& x) {
  double s = std::sqrt(1.0 - rho * rho);
  return Wedge{-rho * x[0] / s, -rho * x[1] / s, cell.lo, cell.hi};
}

}  // namespace

double t_rho_sector(const SectorCell& cell, double rho, const Vec& x) {
  if (cell.empty) return 0.0;
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("t_rho_sector: |rho| > 1");
  if (cell.width() >= kTwoPi - 1e-14) return 1.0;
  if (std::abs(rho) == 1.0) {
    double sgn = rho;
    if (x[0] == 0.0 && x[1] == 0.0) return 1.0;  // apex: tie, measure-zero choice
    double a = wrap_angle(std::atan2(sgn * x[1], sgn * x[0]));
    double rel = a - cell.lo;
    while (rel < 0) rel += kTwoPi;
    return rel <= cell.width() ? 1.0 : 0.0;
  }
  return wedge_measure(shifted_wedge(cell, rho, x));
}

double volume_term_sector(const SectorCell& cell, double rho, const Vec& x) {
  if (cell.empty || cell.width() >= kTwoPi - 1e-14) return 0.0;
  return wedge_moments(shifted_wedge(cell, rho, x)).quad;
}

double dt_drho_sector(const SectorCell& cell, double rho, const Vec& x) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("dt_drho_sector: |rho| < 1");
  if (cell.empty || cell.width() >= kTwoPi - 1e-14) return 0.0;
  double s = std::sqrt(1.0 - rho * rho);
  WedgeMoments wm = wedge_moments(shifted_wedge(cell, rho, x));
  double first = x[0] * wm.fm_x + x[1] * wm.fm_y;
  return (first + rho / s * wm.quad) / s;
}

double lt_rho_indicator(const ConicalPartition& p, int i, double rho, const Vec& x) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("lt_rho_indicator: |rho| < 1");
  auto cells = p.sector_cells();
  const SectorCell& cell = cells.at(i);
  if (cell.empty || cell.width() >= kTwoPi - 1e-14) return 0.0;
  double s = std::sqrt(1.0 - rho * rho);
  Vec shift{rho * x[0], rho * x[1]};
  double grad = 0.0;
  // inward normals at the two boundary rays, weighted by the Gaussian surface
  // measure of the shifted rays
  for (int e = 0; e < 2; ++e) {
    double theta = e == 0 ? cell.lo : cell.hi;
    double nang = e == 0 ? theta + 0.5 * kPi : theta - 0.5 * kPi;
    Vec normal{std::cos(nang), std::sin(nang)};
    Vec dir{std::cos(theta), std::sin(theta)};
    auto piece = AffinePiece::make_half_hyperplane(normal, dir);
    double sm = gaussian_surface_measure_shifted(piece, shift, s);
    grad += (x[0] * normal[0] + x[1] * normal[1]) * sm;
  }
  return grad / s + rho / (1.0 - rho * rho) * volume_term_sector(cell, rho, x);
}

LtDifference lt_rho_difference(const ConicalPartition& p, int i, int j, double rho,
                               const Vec& x) {
  if (i == j) throw std::invalid_argument("lt_rho_difference: i == j");
  auto cells = p.sector_cells();
  LtDifference out;
  out.boundary = lt_rho_indicator(p, i, rho, x) - lt_rho_indicator(p, j, rho, x);
  out.integral = dt_drho_sector(cells.at(i), rho, x) - dt_drho_sector(cells.at(j), rho, x);
  return out;
}

// --- noise stability J -------------------------------------------------------

namespace {

double j_montecarlo(const ConicalPartition& p, double rho, const JOptions& opts,
                    double* stderr_out) {
  const int chunks = 64;
  long per_chunk = std::max<long>(1, opts.samples / chunks);
  std::vector<long> hits(chunks, 0);
  RandomSource master(opts.seed);
  std::vector<std::uint64_t> seeds(chunks);
  for (int c = 0; c < chunks; ++c) seeds[c] = master.substream(c).seed();
  parallel_chunks(chunks, [&](int c) {
    RandomSource rng(seeds[c]);
    CorrelationParam cp(rho);
    long h = 0;
    for (long s = 0; s < per_chunk; ++s) {
      auto [xv, yv] = sample_correlated_pair(cp, p.dimension(), rng);
      if (p.classify(xv) == p.classify(yv)) ++h;
    }
    hits[c] = h;
  });
  long total = 0;
  for (long h : hits) total += h;
  long n = per_chunk * chunks;
  double jv = static_cast<double>(total) / n;
  if (stderr_out) *stderr_out = std::sqrt(std::max(0.0, jv * (1.0 - jv) / n));
  return jv;
}

double j_quadrature_once(const std::vector<SectorCell>& cells, double rho, int radial,
                         int angular) {
  const auto& [run, rwu] = gauss_legendre_unit(radial);
  const auto& [aun, awu] = gauss_legendre_unit(angular);
  double jv = 0.0;
  for (const auto& cell : cells) {
    if (cell.empty) continue;
    if (cell.width() >= kTwoPi - 1e-14) {
      jv += 1.0;
      continue;
    }
    double width = cell.width();
    for (int a = 0; a < angular; ++a) {
      double t = cell.lo + width * aun[a];
      double ct = std::cos(t), st = std::sin(t);
      double acc = 0.0;
      for (int r = 0; r < radial; ++r) {
        double rr = 12.0 * run[r];
        Vec xv{rr * ct, rr * st};
        acc += 12.0 * rwu[r] * rr * std::exp(-0.5 * rr * rr) * t_rho_sector(cell, rho, xv);
      }
      jv += width * awu[a] * acc / kTwoPi;
    }
  }
  return jv;
}

double antipodal_overlap(const std::vector<SectorCell>& cells) {
  double s = 0.0;
  for (const auto& c : cells) {
    if (c.empty) continue;
    // overlap of [lo, hi] with [lo+pi, hi+pi] on the circle
    double w = c.width();
    if (w >= kTwoPi - 1e-14) {
      s += 1.0;
      continue;
    }
    double ov = std::max(0.0, w - kPi) * 2.0;
    s += ov / kTwoPi;
  }
  return s;
}

}  // namespace

StabilityResult noise_stability_J(const ConicalPartition& p, double rho, JMethod method,
                                  const JOptions& opts) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("noise_stability_J: |rho| > 1");
  StabilityResult res;
  res.method = method;
  switch (method) {
    case JMethod::montecarlo: {
      res.seed = opts.seed;
      res.samples = opts.samples;
      res.value = j_montecarlo(p, rho, opts, &res.error_estimate);
      return res;
    }
    case JMethod::quadrature2d: {
      if (!p.sector_reducible())
        throw method_unavailable("quadrature2d requires a sector-reducible partition");
      auto cells = p.sector_cells();
      if (rho == 1.0) {
        for (const auto& c : cells) res.value += c.width() / kTwoPi;
        res.error_estimate = 0.0;
        return res;
      }
      if (rho == -1.0) {
        res.value = antipodal_overlap(cells);
        res.error_estimate = 0.0;
        return res;
      }
      res.value = j_quadrature_once(cells, rho, opts.radial, opts.angular);
      double coarse = j_quadrature_once(cells, rho, std::max(8, opts.radial / 2),
                                        std::max(8, opts.angular / 2));
      res.error_estimate = std::abs(res.value - coarse);
      return res;
    }
    case JMethod::hermite_series: {
      if (std::abs(rho) >= 1.0)
        throw method_unavailable("hermite_series requires |rho| < 1");
      res.degree = opts.degree;
      double jv = 0.0;
      for (int i = 0; i < p.cells(); ++i) {
        HermiteSeries c = hermite_coefficients_of_cell(p, i, opts.degree);
        for (const auto& [ell, a] : c.coefficients())
          jv += std::pow(rho, ell.degree()) * a * a;
      }
      res.value = jv;
      res.error_estimate = std::pow(std::abs(rho), opts.degree + 1) / (1.0 - std::abs(rho));
      return res;
    }
  }
  throw std::logic_error("unreachable");
}

// --- spectral coefficients and psi_rho ----------------------------------------

HermiteSeries hermite_coefficients_of_cell(const ConicalPartition& p, int i,
                                           int max_degree) {
  if (!p.sector_reducible())
    throw method_unavailable(
        "hermite_coefficients_of_cell: quadrature path requires sectors (use the MC path)");
  auto cells = p.sector_cells();
  const SectorCell& cell = cells.at(i);
  HermiteSeries out(p.dimension(), max_degree);
  if (cell.empty) return out;
  const int D = max_degree;
  std::vector<double> table((D + 1) * (D + 1), 0.0);
  const int radial = std::max(40, 2 * D + 16);
  const int angular = std::max(32, 3 * D + 8);
  const auto& [run, rwu] = gauss_legendre_unit(radial);
  const auto& [aun, awu] = gauss_legendre_unit(angular);
  const double width = cell.width();
  Vec rn(radial), rf(radial);
  for (int r = 0; r < radial; ++r) {
    rn[r] = 12.0 * run[r];
    rf[r] = 12.0 * rwu[r] * rn[r] * std::exp(-0.5 * rn[r] * rn[r]) / kTwoPi;
  }
  std::vector<double> c1(D + 1), c2(D + 1);
  for (int a = 0; a < angular; ++a) {
    double t = cell.lo + width * aun[a];
    double ct = std::cos(t), st = std::sin(t);
    double aw = width * awu[a];
    for (int r = 0; r < radial; ++r) {
      double w = aw * rf[r];
      hermite_orthonormal_column(D, rn[r] * ct, c1.data());
      hermite_orthonormal_column(D, rn[r] * st, c2.data());
      for (int d1 = 0; d1 <= D; ++d1) {
        double wc = w * c1[d1];
        for (int d2 = 0; d2 + d1 <= D; ++d2) table[d1 * (D + 1) + d2] += wc * c2[d2];
      }
    }
  }
  int n = p.dimension();
  for (int d1 = 0; d1 <= D; ++d1) {
    for (int d2 = 0; d2 + d1 <= D; ++d2) {
      double v = table[d1 * (D + 1) + d2];
      if (v == 0.0) continue;
      std::vector<int> e(n, 0);
      e[0] = d1;
      e[1] = d2;
      out.set(MultiIndex(e), v);
    }
  }
  return out;
}

HermiteSeries hermite_coefficients_of_cell_mc(const ConicalPartition& p, int i,
                                              int max_degree, RandomSource& rng,
                                              long samples, double* error_mass) {
  int n = p.dimension();
  auto idx = MultiIndex::up_to_degree(n, max_degree);
  std::size_t cnt = idx.size();
  Vec sum(cnt, 0.0), sum_sq(cnt, 0.0);
  std::vector<Vec> cols(n, Vec(max_degree + 1));
  for (long s = 0; s < samples; ++s) {
    Vec x = rng.gaussian_vec(n);
    if (p.classify(x) != i) continue;
    for (int d = 0; d < n; ++d) hermite_orthonormal_column(max_degree, x[d], cols[d].data());
    for (std::size_t t = 0; t < cnt; ++t) {
      double v = 1.0;
      for (int d = 0; d < n; ++d) v *= cols[d][idx[t][d]];
      sum[t] += v;
      sum_sq[t] += v * v;
    }
  }
  HermiteSeries out(n, max_degree);
  double err_sq = 0.0;
  for (std::size_t t = 0; t < cnt; ++t) {
    double mean = sum[t] / samples;
    out.set(idx[t], mean);
    err_sq += (sum_sq[t] / samples - mean * mean) / samples;
  }
  if (error_mass) *error_mass = std::sqrt(std::max(0.0, err_sq));
  return out;
}

double psi_series_tail_bound(int k, double rho, int degree) {
  double r = std::abs(rho);
  if (r >= 1.0) return std::numeric_limits<double>::infinity();
  if (r == 0.0) return 0.0;
  return k * std::pow(r, degree) * (degree + 1 - degree * r) / ((1.0 - r) * (1.0 - r));
}

PsiResult psi_rho(const ConicalPartition& p, double rho, int degree,
                  double tail_tolerance) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("psi_rho: |rho| < 1 required");
  PsiResult res;
  res.degree = degree;
  double v = 0.0;
  for (int i = 0; i < p.cells(); ++i) {
    HermiteSeries c = hermite_coefficients_of_cell(p, i, degree);
    for (const auto& [ell, a] : c.coefficients()) {
      int m = ell.degree();
      if (m == 0) continue;
      v += m * std::pow(rho, m - 1) * a * a;
    }
  }
  res.value = v;
  res.tail_bound = psi_series_tail_bound(p.cells(), rho, degree);
  res.converged = res.tail_bound <= tail_tolerance;
  return res;
}

double psi_rho_from_coefficients(const std::vector<Vec>& coefficients,
                                 const std::vector<MultiIndex>& index_set, double rho) {
  double v = 0.0;
  for (const auto& row : coefficients) {
    if (row.size() != index_set.size())
      throw std::invalid_argument("psi_rho_from_coefficients: row size mismatch");
    for (std::size_t t = 0; t < row.size(); ++t) {
      int m = index_set[t].degree();
      if (m == 0) continue;
      v += m * std::pow(rho, m - 1) * row[t] * row[t];
    }
  }
  return v;
}

}  // namespace gns
