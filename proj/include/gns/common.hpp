#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gns {

using Vec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec add: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec sub: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator*(double c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

/// Unit vector (cos t, sin t).
inline Vec unit2(double t) { return {std::cos(t), std::sin(t)}; }

/// Angle of a 2-D vector in [0, 2pi).
inline double angle_of(const Vec& v) {
  double a = std::atan2(v[1], v[0]);
  if (a < 0) a += kTwoPi;
  return a;
}

/// Reduce an angle to [0, 2pi).
inline double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

/// Thrown when an enumeration or sample budget limit would be exceeded.
class cap_exceeded : public std::runtime_error {
 public:
  explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a requested evaluation method does not apply to the input.
class method_unavailable : public std::runtime_error {
 public:
  explicit method_unavailable(const std::string& what) : std::runtime_error(what) {}
};

/// Number of worker threads: GNS_WORKERS env var, else hardware concurrency.
unsigned worker_count();

/// Runs fn(chunk) for chunk = 0..chunks-1 across workers.  Chunk decomposition
/// is fixed, so results that are merged by chunk index do not depend on the
/// worker count.
void parallel_chunks(int chunks, const std::function<void(int)>& fn);

}  // namespace gns
