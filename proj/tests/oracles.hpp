#pragma once

// Independent reference computations for the tests. Nothing here calls the
// series / continued-fraction / partial-fraction code it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace compnoma::oracle {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;

// int_0^inf g(x) dx in long double.
inline long double integrate_half_line(const std::function<long double(long double)>& g) {
  exp_sinh<long double> integrator;
  return integrator.integrate(g, 0.0L, std::numeric_limits<long double>::infinity());
}

inline long double integrate_interval(const std::function<long double(long double)>& g, long double a, long double b) {
  return gauss_kronrod<long double, 61>::integrate(g, a, b, 15, 1e-18L);
}

// Ei(x) for x < 0 by quadrature of E1(z) = int_z^inf e^-u / u du, z = -x.
inline long double expi_quadrature(long double x) {
  const long double z = -x;
  if (z >= 1.0L) {
    // E1(z) = e^-z int_0^inf e^-s / (s + z) ds
    const long double tail = integrate_half_line([z](long double s) { return std::exp(-s) / (s + z); });
    return -std::exp(-z) * tail;
  }
  // int_z^1 e^-u/u du with u = e^w, plus E1(1).
  const long double head = integrate_interval([](long double w) { return std::exp(-std::exp(w)); }, std::log(z), 0.0L);
  const long double e1_one = std::exp(-1.0L) * integrate_half_line([](long double s) { return std::exp(-s) / (s + 1.0L); });
  return -(head + e1_one);
}

// Density of Exp(k1) + Exp(k2) by direct convolution.
inline long double convolution_pdf(long double k1, long double k2, long double x) {
  if (x == 0.0L) return 0.0L;
  return integrate_interval([=](long double t) { return k1 * std::exp(-k1 * t) * k2 * std::exp(-k2 * (x - t)); }, 0.0L, x);
}

// Craig's form Q(sqrt(d)) = (1/pi) int_0^{pi/2} exp(-d / (2 sin^2 t)) dt,
// averaged over d ~ Exp(mean) through its MGF.
inline long double craig_average_q(const std::function<double(double mean, double s)>& mgf, double mean) {
  const long double pi = std::numbers::pi_v<long double>;
  return integrate_interval(
             [&](long double t) {
               const long double s2 = std::sin(t) * std::sin(t);
               if (s2 == 0.0L) return 0.0L;
               return static_cast<long double>(mgf(mean, static_cast<double>(1.0L / (2.0L * s2))));
             },
             0.0L, pi / 2.0L) /
         pi;
}

// Kolmogorov-Smirnov p-value for sample vs a continuous CDF (asymptotic
// distribution with the Stephens small-sample correction).
inline double ks_pvalue(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k < 200; ++k) p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace compnoma::oracle
