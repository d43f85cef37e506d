#pragma once

// Independent reference computations used only by tests.

#include <cmath>

#include "gns/common.hpp"
#include "gns/hermite.hpp"

namespace gns::testing {

/// h_l(x) by the explicit closed sum
///   sum_{m=0}^{floor(l/2)} x^{l-2m} (-1)^m 2^{-m} / (m! (l-2m)!).
/// Cancels badly for large l; reference for moderate degrees only.
inline double hermite_eval_sum(int ell, double x) {
  double s = 0.0;
  for (int m = 0; m <= ell / 2; ++m) {
    double log_c = -m * std::log(2.0) - std::lgamma(m + 1.0) - std::lgamma(ell - 2 * m + 1.0);
    double term = std::exp(log_c);
    if (m % 2 == 1) term = -term;
    s += term * std::pow(x, ell - 2 * m);
  }
  return s;
}

/// Centered second-order finite difference d/dt f at t.
template <typename F>
double central_diff(F f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace gns::testing
