#pragma once

// Special functions used by the closed-form capacity and error-probability
// expressions: the exponential integral on the negative real axis, the
// Gaussian Q-function and the moment generating function of an exponential
// random variable.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "compnoma/error.hpp"

namespace compnoma {

namespace detail {

// e^{z} E1(z) for z >= 1 by the modified Lentz continued fraction
//   E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...))).
inline double scaled_e1_continued_fraction(double z) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double b = z + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw DomainError("expi: continued fraction failed to converge at z=" + std::to_string(z));
}

// Ei(x) for -1 < x < 0 by the convergent series
//   Ei(x) = gamma + ln|x| + sum_{n>=1} x^n / (n n!).
inline double expi_series(double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    term *= x / n;
    const double contribution = term / n;
    sum += contribution;
    if (std::abs(contribution) < 1e-17 * std::abs(sum)) break;
  }
  return std::numbers::egamma + std::log(-x) + sum;
}

}  // namespace detail

/// Exponential integral Ei(x) = -E1(-x) for x < 0. Always negative.
/// Throws DomainError for x >= 0 or NaN.
inline double expi(double x) {
  if (!(x < 0.0)) throw DomainError("expi: argument must be negative, got " + std::to_string(x));
  const double z = -x;
  if (z < 1.0) return detail::expi_series(x);
  return -std::exp(-z) * detail::scaled_e1_continued_fraction(z);
}

/// e^{-x} Ei(x) for x < 0, without overflow for large |x|.
/// This is the quantity e^{a k} Ei(-a k) in the hypoexponential log expectation.
inline double expi_scaled(double x) {
  if (!(x < 0.0)) throw DomainError("expi_scaled: argument must be negative, got " + std::to_string(x));
  const double z = -x;
  if (z < 1.0) return std::exp(z) * detail::expi_series(x);
  return -detail::scaled_e1_continued_fraction(z);
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x) = erfc(x / sqrt 2) / 2.
inline double q_func(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// MGF of an exponential variable with the given mean, evaluated as
/// E[exp(-s X)] = 1 / (1 + s mean).
inline double mgf_exp(double mean, double s) {
  if (mean == 0.0) return 1.0;
  if (std::isinf(s)) return 0.0;
  return 1.0 / (1.0 + s * mean);
}

}  // namespace compnoma
