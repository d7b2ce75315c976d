#pragma once

// Reference computations used by the tests.  Kept deliberately naive and
// independent of the library's own formulas.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using ld = long double;

/// Phi for real |x| > 1 in long double.
inline ld phi(ld x) { return x > 0 ? x + std::sqrt(x * x - 1) : x - std::sqrt(x * x - 1); }

/// Composite Simpson on [a, b] with n (even) panels.
inline ld simpson(const std::function<ld(ld)>& f, ld a, ld b, int n = 2000) {
  if (n % 2) ++n;
  const ld h = (b - a) / n;
  ld s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

/// Integral of g(x) dx / (pi sqrt(1 - x^2)) over [-1, 1] by Gauss-Chebyshev.
inline ld gauss_chebyshev(const std::function<ld(ld)>& g, int n = 200) {
  ld s = 0;
  for (int i = 1; i <= n; ++i) s += g(std::cos((2 * i - 1) * std::numbers::pi_v<ld> / (2 * n)));
  return s / n;
}

/// Antiderivative of log|x - t| in t.
inline ld log_antiderivative(ld x, ld t) {
  const ld u = t - x;
  return u == 0 ? 0 : u * std::log(std::fabs(u)) - u;
}

/// Average of log|x - t| over t in [l, r].
inline ld cell_log_average(ld l, ld r, ld x) {
  return (log_antiderivative(x, r) - log_antiderivative(x, l)) / (r - l);
}

/// Arcsine distribution function of [c, d].
inline double arcsine_cdf(double c, double d, double x) {
  if (x <= c) return 0.0;
  if (x >= d) return 1.0;
  return 0.5 + std::asin((2 * x - c - d) / (d - c)) / std::numbers::pi;
}

}  // namespace oracle
