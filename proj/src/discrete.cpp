#include "gns/discrete.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace gns {

namespace {

long checked_pow(int k, int n, long cap) {
  long p = 1;
  for (int i = 0; i < n; ++i) {
    p *= k;
    if (p > cap) throw cap_exceeded("k^n exceeds the enumeration cap");
  }
  return p;
}

}  // namespace

KaryBasis::KaryBasis(int k) : k_(k) {
  if (k < 2) throw std::invalid_argument("KaryBasis: k >= 2 required");
  rows_.assign(k, Vec(k, 0.0));
  rows_[0].assign(k, 1.0);
  // Gram-Schmidt over indicator-minus-uniform functions in alphabet order
  auto inner = [k](const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += a[i] * b[i];
    return s / k;
  };
  for (int j = 1; j < k; ++j) {
    Vec v(k, -1.0 / k);
    v[j - 1] += 1.0;
    for (int m = 0; m < j; ++m) {
      double c = inner(v, rows_[m]);
      for (int i = 0; i < k; ++i) v[i] -= c * rows_[m][i];
    }
    double nrm = std::sqrt(inner(v, v));
    if (nrm < 1e-14) throw std::logic_error("KaryBasis: degenerate Gram-Schmidt step");
    for (int i = 0; i < k; ++i) v[i] /= nrm;
    // sign convention: first nonzero value positive
    for (int i = 0; i < k; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0)
          for (int t = 0; t < k; ++t) v[t] = -v[t];
        break;
      }
    }
    rows_[j] = std::move(v);
  }
}

KaryBasis::KaryBasis(int k, std::vector<Vec> rows) : k_(k), rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != k) throw std::invalid_argument("KaryBasis: need k rows");
  for (int i = 0; i < k; ++i) {
    if (std::abs(rows_[0][i] - 1.0) > 1e-12)
      throw std::invalid_argument("KaryBasis: W_1 must be the constant 1");
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += rows_[a][i] * rows_[b][i];
      s /= k;
      if (std::abs(s - (a == b ? 1.0 : 0.0)) > 1e-10)
        throw std::invalid_argument("KaryBasis: rows are not orthonormal");
    }
  }
}

KaryFunction::KaryFunction(int k, int n, std::vector<Vec> table)
    : k_(k), n_(n), table_(std::move(table)) {
  if (k < 2 || n < 1) throw std::invalid_argument("KaryFunction: k >= 2, n >= 1");
  long expect = checked_pow(k, n, 100000000);
  if (static_cast<long>(table_.size()) != expect)
    throw std::invalid_argument("KaryFunction: table size != k^n");
  for (const auto& v : table_)
    if (static_cast<int>(v.size()) != k)
      throw std::invalid_argument("KaryFunction: entries must have k components");
}

KaryFunction KaryFunction::constant(int k, int n, const Vec& value) {
  long total = checked_pow(k, n, 100000000);
  return KaryFunction(k, n, std::vector<Vec>(total, value));
}

bool KaryFunction::simplex_valued(double tol) const {
  for (const auto& v : table_) {
    double s = 0.0;
    for (double c : v) {
      if (c < -tol) return false;
      s += c;
    }
    if (std::abs(s - 1.0) > tol) return false;
  }
  return true;
}

long KaryFunction::index_of(const std::vector<int>& letters) const {
  if (static_cast<int>(letters.size()) != n_)
    throw std::invalid_argument("index_of: wrong arity");
  long idx = 0;
  for (int t = 0; t < n_; ++t) {
    if (letters[t] < 1 || letters[t] > k_) throw std::invalid_argument("index_of: letter range");
    idx = idx * k_ + (letters[t] - 1);
  }
  return idx;
}

std::vector<int> KaryFunction::letters_of(long index) const {
  std::vector<int> letters(n_);
  for (int t = n_ - 1; t >= 0; --t) {
    letters[t] = static_cast<int>(index % k_) + 1;
    index /= k_;
  }
  return letters;
}

std::string KaryFunction::to_json() const {
  nlohmann::json j;
  j["k"] = k_;
  j["n"] = n_;
  Vec flat;
  flat.reserve(table_.size() * k_);
  for (const auto& v : table_) flat.insert(flat.end(), v.begin(), v.end());
  j["table"] = flat;
  return j.dump();
}

KaryFunction KaryFunction::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int k = j.at("k"), n = j.at("n");
  Vec flat = j.at("table").get<Vec>();
  if (k < 2 || flat.size() % k != 0) throw std::invalid_argument("KaryFunction: bad table");
  std::vector<Vec> table(flat.size() / k, Vec(k));
  for (std::size_t i = 0; i < table.size(); ++i)
    for (int c = 0; c < k; ++c) table[i][c] = flat[i * k + c];
  return KaryFunction(k, n, std::move(table));
}

int FourierTable::weight(long sigma_index) const {
  int w = 0;
  for (int t = 0; t < n; ++t) {
    long digit = sigma_index % k;
    if (digit != 0) ++w;  // digit 0 encodes sigma_t = 1
    sigma_index /= k;
  }
  return w;
}

namespace {

// apply the k x k matrix M (M[out][in]) along every coordinate axis in turn
std::vector<Vec> tensor_apply(const std::vector<Vec>& data, int k, int n,
                              const std::vector<Vec>& m) {
  std::vector<Vec> cur = data;
  long total = static_cast<long>(cur.size());
  long stride = 1;  // stride of the last axis first
  for (int axis = n - 1; axis >= 0; --axis) {
    std::vector<Vec> next(cur.size(), Vec(cur[0].size(), 0.0));
    for (long base = 0; base < total; ++base) {
      long digit = (base / stride) % k;
      long rest = base - digit * stride;
      for (long in = 0; in < k; ++in) {
        double c = m[digit][in];
        if (c == 0.0) continue;
        const Vec& src = cur[rest + in * stride];
        Vec& dst = next[base];
        for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += c * src[q];
      }
    }
    cur = std::move(next);
    stride *= k;
  }
  return cur;
}

}  // namespace

FourierTable fourier_transform(const KaryFunction& f, const KaryBasis& basis) {
  if (basis.k() != f.k()) throw std::invalid_argument("fourier_transform: basis mismatch");
  int k = f.k(), n = f.n();
  // forward matrix: fhat(sigma) = (1/k) sum_s W_sigma(s) f(s) per axis
  std::vector<Vec> fwd(k, Vec(k));
  for (int s1 = 0; s1 < k; ++s1)
    for (int s2 = 0; s2 < k; ++s2) fwd[s1][s2] = basis.w(s1 + 1, s2 + 1) / k;
  FourierTable t;
  t.k = k;
  t.n = n;
  t.coeffs = tensor_apply(f.table(), k, n, fwd);
  return t;
}

KaryFunction fourier_inverse(const FourierTable& t, const KaryBasis& basis) {
  if (basis.k() != t.k) throw std::invalid_argument("fourier_inverse: basis mismatch");
  int k = t.k;
  std::vector<Vec> inv(k, Vec(k));
  for (int s = 0; s < k; ++s)
    for (int sig = 0; sig < k; ++sig) inv[s][sig] = basis.w(sig + 1, s + 1);
  return KaryFunction(k, t.n, tensor_apply(t.coeffs, k, t.n, inv));
}

KaryFunction discrete_t_rho(const KaryFunction& f, double rho, const KaryBasis& basis) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("discrete_t_rho: |rho| > 1");
  FourierTable t = fourier_transform(f, basis);
  for (std::size_t s = 0; s < t.coeffs.size(); ++s) {
    double damp = std::pow(rho, t.weight(static_cast<long>(s)));
    for (double& c : t.coeffs[s]) c *= damp;
  }
  return fourier_inverse(t, basis);
}

double discrete_stability(const KaryFunction& f, double rho, const KaryBasis& basis,
                          long enumeration_cap) {
  checked_pow(f.k(), f.n(), enumeration_cap);
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("discrete_stability: |rho| > 1");
  FourierTable t = fourier_transform(f, basis);
  double s = 0.0;
  for (std::size_t sig = 0; sig < t.coeffs.size(); ++sig) {
    double damp = std::pow(rho, t.weight(static_cast<long>(sig)));
    double mass = 0.0;
    for (double c : t.coeffs[sig]) mass += c * c;
    s += damp * mass;
  }
  return s;
}

double discrete_stability_rerandomized(const KaryFunction& f, double rho,
                                       long enumeration_cap) {
  long total = checked_pow(f.k(), f.n(), enumeration_cap);
  int k = f.k(), n = f.n();
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("|rho| > 1");
  // T_rho f(x) = sum_{S subset of coords} rho^{n-|S|} (1-rho)^{|S|} E_S f(x),
  // E_S averaging the coordinates in S; enumerate every replacement exactly.
  double acc = 0.0;
  std::vector<int> letters(n), scratch(n);
  for (long xi = 0; xi < total; ++xi) {
    std::vector<int> x = f.letters_of(xi);
    const Vec& fx = f.value(xi);
    for (long mask = 0; mask < (1L << n); ++mask) {
      int bits = __builtin_popcountl(mask);
      double wgt = std::pow(rho, n - bits) * std::pow(1.0 - rho, bits);
      if (wgt == 0.0) continue;
      // enumerate replacements of the coordinates in the mask
      long reps = 1;
      for (int b = 0; b < bits; ++b) reps *= k;
      double mean = 0.0;
      for (long r = 0; r < reps; ++r) {
        scratch = x;
        long rr = r;
        for (int t = 0; t < n; ++t) {
          if (mask & (1L << t)) {
            scratch[t] = static_cast<int>(rr % k) + 1;
            rr /= k;
          }
        }
        const Vec& fy = f.value(f.index_of(scratch));
        double d = 0.0;
        for (int q = 0; q < k; ++q) d += fx[q] * fy[q];
        mean += d;
      }
      acc += wgt * mean / reps;
    }
  }
  return acc / total;
}

KaryFunction plurality_fn(int m, int k) {
  if (m < 1 || k < 2) throw std::invalid_argument("plurality_fn: m >= 1, k >= 2");
  long total = checked_pow(k, m, 100000000);
  std::vector<Vec> table(total);
  std::vector<int> counts(k);
  KaryFunction shape = KaryFunction::constant(k, m, Vec(k, 0.0));
  for (long xi = 0; xi < total; ++xi) {
    auto letters = shape.letters_of(xi);
    std::fill(counts.begin(), counts.end(), 0);
    for (int t = 0; t < m; ++t) counts[letters[t] - 1]++;
    int best = 0;
    bool strict = true;
    for (int c = 1; c < k; ++c) {
      if (counts[c] > counts[best]) {
        best = c;
        strict = true;
      } else if (counts[c] == counts[best]) {
        strict = false;
      }
    }
    Vec v(k, 0.0);
    if (strict) {
      v[best] = 1.0;
    } else {
      v.assign(k, 1.0 / k);
    }
    table[xi] = std::move(v);
  }
  return KaryFunction(k, m, std::move(table));
}

double influence(const KaryFunction& f, int coord, int out, const KaryBasis& basis) {
  if (coord < 1 || coord > f.n()) throw std::invalid_argument("influence: coordinate range");
  if (out < 1 || out > f.k()) throw std::invalid_argument("influence: output range");
  FourierTable t = fourier_transform(f, basis);
  double s = 0.0;
  long stride = 1;
  for (int a = f.n() - coord; a > 0; --a) stride *= f.k();
  for (std::size_t sig = 0; sig < t.coeffs.size(); ++sig) {
    long digit = (static_cast<long>(sig) / stride) % f.k();
    if (digit == 0) continue;  // sigma_coord = 1
    double c = t.coeffs[sig][out - 1];
    s += c * c;
  }
  return s;
}

}  // namespace gns
