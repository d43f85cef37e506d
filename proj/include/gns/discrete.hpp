#pragma once

#include <string>
#include <vector>

#include "gns/common.hpp"

namespace gns {

/// Orthonormal basis W_1..W_k for functions on {1..k} under
/// <g,h>_k = (1/k) sum_s g(s) h(s), with W_1 = 1.  W_2..W_k come from
/// Gram-Schmidt over indicator-minus-uniform functions in alphabet order,
/// sign fixed by W_j(1) > 0 where nonzero.
class KaryBasis {
 public:
  explicit KaryBasis(int k);
  /// Basis from explicit rows (tests exercise basis independence with it);
  /// rows must be orthonormal with row 0 constant one.
  KaryBasis(int k, std::vector<Vec> rows);

  int k() const { return k_; }
  /// W_j(s); j, s are 1-based as in the definition.
  double w(int j, int s) const { return rows_[j - 1][s - 1]; }
  const std::vector<Vec>& rows() const { return rows_; }

 private:
  int k_;
  std::vector<Vec> rows_;
};

/// f: {1..k}^n -> R^k stored as a flat row-major table (coordinate 1 most
/// significant); entries of Delta_k for genuine k-ary functions, arbitrary
/// vectors for intermediate values such as T_rho f.
class KaryFunction {
 public:
  KaryFunction(int k, int n, std::vector<Vec> table);
  static KaryFunction constant(int k, int n, const Vec& value);

  int k() const { return k_; }
  int n() const { return n_; }
  long inputs() const { return static_cast<long>(table_.size()); }
  const Vec& value(long index) const { return table_[index]; }
  Vec& value(long index) { return table_[index]; }
  const std::vector<Vec>& table() const { return table_; }

  /// Whether every entry lies on the probability simplex.
  bool simplex_valued(double tol = 1e-12) const;

  long index_of(const std::vector<int>& letters) const;  // letters are 1-based
  std::vector<int> letters_of(long index) const;

  std::string to_json() const;
  static KaryFunction from_json(const std::string& text);

 private:
  int k_;
  int n_;
  std::vector<Vec> table_;
};

/// Fourier coefficients f^_i(sigma) for sigma in {1..k}^n, stored per output
/// component in the same row-major layout as KaryFunction.
struct FourierTable {
  int k = 0;
  int n = 0;
  std::vector<Vec> coeffs;  // coeffs[sigma_index][i]

  /// |sigma| = #{t : sigma_t != 1}.
  int weight(long sigma_index) const;
};

FourierTable fourier_transform(const KaryFunction& f, const KaryBasis& basis);
KaryFunction fourier_inverse(const FourierTable& t, const KaryBasis& basis);

/// Coefficient damping by rho^{|sigma|}; output entries need not stay on the
/// simplex.
KaryFunction discrete_t_rho(const KaryFunction& f, double rho, const KaryBasis& basis);

/// (1/k^n) sum_x <f(x), T_rho f(x)>, the Fourier route: exact finite sum.
double discrete_stability(const KaryFunction& f, double rho, const KaryBasis& basis,
                          long enumeration_cap = 1000000);

/// Independent route: expand T_rho = prod_t (rho Id + (1-rho) E_t) and
/// enumerate every (input, rerandomized-coordinate-set, replacement) outcome
/// exactly.  Signed weights keep the identity valid for negative rho.
double discrete_stability_rerandomized(const KaryFunction& f, double rho,
                                       long enumeration_cap = 1000000);

/// PLUR_{m,k}: e_j on strict-plurality inputs, the uniform point on ties.
KaryFunction plurality_fn(int m, int k);

/// Influence of a coordinate on output component `out`:
/// sum over sigma with sigma_coord != 1 of f^_out(sigma)^2.
double influence(const KaryFunction& f, int coord, int out, const KaryBasis& basis);

}  // namespace gns
