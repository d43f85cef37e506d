#include "gns/hermite.hpp"

#include <algorithm>
#include <cmath>

namespace gns {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  degree_ = 0;
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
    degree_ += e;
  }
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  if (degree_ != o.degree_) return degree_ < o.degree_;
  return entries_ < o.entries_;
}

double MultiIndex::log_factorial() const {
  double s = 0.0;
  for (int e : entries_) s += std::lgamma(static_cast<double>(e) + 1.0);
  return s;
}

std::vector<MultiIndex> MultiIndex::up_to_degree(int n, int max_degree) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(n, 0);
  // enumerate compositions of each degree
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n - 1) {
      cur[pos] = remaining;
      out.emplace_back(cur);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      cur[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  for (int d = 0; d <= max_degree; ++d) rec(0, d);
  std::sort(out.begin(), out.end());
  return out;
}

double hermite_eval(int ell, double x) {
  if (ell < 0) throw std::invalid_argument("hermite_eval: negative degree");
  if (!std::isfinite(x)) throw std::domain_error("hermite_eval: non-finite argument");
  if (ell == 0) return 1.0;
  double prev = 1.0;   // h_0
  double cur = x;      // h_1
  for (int m = 1; m < ell; ++m) {
    double next = (x * cur - prev) / (m + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_eval_orthonormal(int ell, double x) {
  if (ell < 0) throw std::invalid_argument("hermite_eval_orthonormal: negative degree");
  if (!std::isfinite(x)) throw std::domain_error("hermite_eval_orthonormal: non-finite argument");
  if (ell == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int m = 1; m < ell; ++m) {
    double next = (x * cur - std::sqrt(static_cast<double>(m)) * prev) /
                  std::sqrt(static_cast<double>(m + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_orthonormal_column(int max_ell, double x, double* out) {
  out[0] = 1.0;
  if (max_ell == 0) return;
  out[1] = x;
  for (int m = 1; m < max_ell; ++m) {
    out[m + 1] = (x * out[m] - std::sqrt(static_cast<double>(m)) * out[m - 1]) /
                 std::sqrt(static_cast<double>(m + 1));
  }
}

double hermite_eval_multi(const MultiIndex& ell, const Vec& x) {
  if (ell.dimension() != static_cast<int>(x.size()))
    throw std::invalid_argument("hermite_eval_multi: dimension mismatch");
  double p = 1.0;
  for (int i = 0; i < ell.dimension(); ++i) p *= hermite_eval(ell[i], x[i]);
  return p;
}

double hermite_eval_multi_orthonormal(const MultiIndex& ell, const Vec& x) {
  if (ell.dimension() != static_cast<int>(x.size()))
    throw std::invalid_argument("hermite_eval_multi_orthonormal: dimension mismatch");
  double p = 1.0;
  for (int i = 0; i < ell.dimension(); ++i) p *= hermite_eval_orthonormal(ell[i], x[i]);
  return p;
}

double hermite_log_norm_sq(const MultiIndex& ell) { return -ell.log_factorial(); }

double hermite_norm_sq(const MultiIndex& ell) { return std::exp(hermite_log_norm_sq(ell)); }

double hermite_growth_bound(const MultiIndex& ell, const Vec& x) {
  if (ell.degree() < 1) throw std::invalid_argument("hermite_growth_bound: |l| >= 1 required");
  if (ell.dimension() != static_cast<int>(x.size()))
    throw std::invalid_argument("hermite_growth_bound: dimension mismatch");
  int n = ell.dimension();
  double log_b = n * std::log(static_cast<double>(ell.degree())) +
                 ell.degree() * std::log(3.0);
  for (int i = 0; i < n; ++i) {
    double ax = std::abs(x[i]);
    if (ax > 1.0) log_b += ell[i] * std::log(ax);
  }
  return std::exp(log_b);
}

void HermiteSeries::set(const MultiIndex& ell, double value) {
  if (ell.dimension() != dimension_)
    throw std::invalid_argument("HermiteSeries::set: dimension mismatch");
  if (ell.degree() > truncation_degree_)
    throw std::invalid_argument("HermiteSeries::set: degree above truncation");
  if (value == 0.0) {
    coeffs_.erase(ell);
  } else {
    coeffs_[ell] = value;
  }
}

double HermiteSeries::coefficient(const MultiIndex& ell) const {
  auto it = coeffs_.find(ell);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double HermiteSeries::mass() const {
  double s = 0.0;
  for (const auto& [ell, a] : coeffs_) s += a * a;
  return s;
}

double HermiteSeries::evaluate(const Vec& x) const {
  if (static_cast<int>(x.size()) != dimension_)
    throw std::invalid_argument("HermiteSeries::evaluate: dimension mismatch");
  double s = 0.0;
  for (const auto& [ell, a] : coeffs_) s += a * hermite_eval_multi_orthonormal(ell, x);
  return s;
}

}  // namespace gns
