#pragma once

#include <map>
#include <vector>

#include "gns/common.hpp"

namespace gns {

/// Multi-index l in N^n with cached total degree |l|.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  const std::vector<int>& entries() const { return entries_; }
  int dimension() const { return static_cast<int>(entries_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return entries_[i]; }

  /// Canonical total order: degree first, then lexicographic.
  bool operator<(const MultiIndex& o) const;
  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }

  /// log(l!) = sum_i log(l_i!)
  double log_factorial() const;
  /// l! as a double (may overflow for very large degrees; see log_factorial).
  double factorial() const { return std::exp(log_factorial()); }

  /// All multi-indices of dimension n with degree <= max_degree, in canonical
  /// order.
  static std::vector<MultiIndex> up_to_degree(int n, int max_degree);

 private:
  std::vector<int> entries_;
  int degree_ = 0;
};

/// h_l(x), normalized so that sum_l lambda^l h_l(x) = exp(lambda x - lambda^2/2).
/// Three-term recurrence h_{l+1} = (x h_l - h_{l-1}) / (l+1); stable for the
/// required range (l <= ~60, |x| <= 12) where the closed factorial sum cancels.
double hermite_eval(int ell, double x);

/// sqrt(l!) h_l(x): the orthonormal polynomial for gamma_1, evaluated by the
/// normalized recurrence.
double hermite_eval_orthonormal(int ell, double x);

/// Evaluates sqrt(l!) h_l(x) for l = 0..max_ell into out[0..max_ell].
void hermite_orthonormal_column(int max_ell, double x, double* out);

/// Tensor product h_l(x) = prod_i h_{l_i}(x_i).
double hermite_eval_multi(const MultiIndex& ell, const Vec& x);

/// prod_i sqrt(l_i!) h_{l_i}(x_i).
double hermite_eval_multi_orthonormal(const MultiIndex& ell, const Vec& x);

/// int h_l^2 dgamma_n = 1/l!, computed in log space.
double hermite_norm_sq(const MultiIndex& ell);
double hermite_log_norm_sq(const MultiIndex& ell);

/// Growth bound |l|^n 3^|l| prod_i max(1, |x_i|^{l_i}) on |sqrt(l!) h_l(x)|;
/// requires |l| >= 1.  Used as a property-test oracle.
double hermite_growth_bound(const MultiIndex& ell, const Vec& x);

/// Sparse Hermite expansion f = sum_l a_l sqrt(l!) h_l of an L2(gamma_n)
/// function, truncated at a total degree.  Keys are stored in the canonical
/// multi-index order so iteration is deterministic.
class HermiteSeries {
 public:
  HermiteSeries(int dimension, int truncation_degree)
      : dimension_(dimension), truncation_degree_(truncation_degree) {
    if (dimension < 1) throw std::invalid_argument("HermiteSeries: dimension < 1");
    if (truncation_degree < 0) throw std::invalid_argument("HermiteSeries: negative degree");
  }

  int dimension() const { return dimension_; }
  int truncation_degree() const { return truncation_degree_; }
  const std::map<MultiIndex, double>& coefficients() const { return coeffs_; }

  void set(const MultiIndex& ell, double value);
  double coefficient(const MultiIndex& ell) const;

  /// sum_l a_l^2 (Plancherel mass of the truncation).
  double mass() const;

  /// Pointwise evaluation sum_l a_l sqrt(l!) h_l(x).
  double evaluate(const Vec& x) const;

 private:
  int dimension_;
  int truncation_degree_;
  std::map<MultiIndex, double> coeffs_;
};

}  // namespace gns
