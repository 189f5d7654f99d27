#pragma once

// Hypoexponential distribution: the law of a sum of independent exponential
// variables with distinct rates k_1..k_n,
//
//   f(x) = sum_i w_i k_i exp(-k_i x),   w_i = prod_{h != i} k_h / (k_h - k_i),
//
// and the closed-form log expectation E[log2(X + a)] built from the identity
//   int_0^inf exp(-A x) ln(B + x) dx = (ln B - e^{AB} Ei(-AB)) / A.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "compnoma/error.hpp"
#include "compnoma/specfun.hpp"

namespace compnoma {

// Exponential rates of the components of a sum, tagged with the cell each
// component comes from.
struct RateVector {
  std::vector<double> rates;
  std::vector<int> labels;

  std::size_t size() const { return rates.size(); }
  bool empty() const { return rates.empty(); }

  void push(double rate, int label) {
    rates.push_back(rate);
    labels.push_back(label);
  }

  // Copy without the component of cell `label`.
  RateVector without(int label) const {
    RateVector out;
    for (std::size_t i = 0; i < size(); ++i)
      if (labels[i] != label) out.push(rates[i], labels[i]);
    return out;
  }
};

// Two rates closer than this (relative) are treated as coincident.
inline constexpr double kRateTolerance = 1e-6;

inline bool rates_coincide(double a, double b) { return std::abs(a - b) < kRateTolerance * b; }

inline bool rates_distinct(const RateVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t h = 0; h < i; ++h)
      if (rates_coincide(v.rates[h], v.rates[i])) return false;
  return true;
}

// Breaks coincident rates by scaling the later one by 1 + 1e-6 (index + 1)
// until it is clear of every earlier rate. Deterministic.
inline RateVector regularize(RateVector v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t h = 0; h < i; ++h) {
        if (rates_coincide(v.rates[h], v.rates[i])) {
          v.rates[i] *= 1.0 + kRateTolerance * static_cast<double>(i + 1);
          moved = true;
        }
      }
    }
  }
  return v;
}

namespace detail {

inline void require_valid(const RateVector& v, const char* who) {
  for (double k : v.rates)
    if (!(k > 0.0) || std::isinf(k)) throw DomainError(std::string(who) + ": rates must be positive and finite");
  if (!rates_distinct(v)) throw DomainError(std::string(who) + ": rates must be distinct (regularize first)");
}

}  // namespace detail

// Partial-fraction weights w_i. They always sum to one.
inline std::vector<long double> hypoexp_weights(const RateVector& v) {
  detail::require_valid(v, "hypoexp_weights");
  std::vector<long double> w(v.size(), 1.0L);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long double ki = v.rates[i];
    for (std::size_t h = 0; h < v.size(); ++h) {
      if (h == i) continue;
      const long double kh = v.rates[h];
      w[i] *= kh / (kh - ki);
    }
  }
  return w;
}

inline double hypoexp_pdf(const RateVector& v, double x) {
  if (v.empty()) throw DomainError("hypoexp_pdf: empty rate vector");
  if (!(x >= 0.0)) throw DomainError("hypoexp_pdf: x must be >= 0");
  const auto w = hypoexp_weights(v);
  long double f = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long double k = v.rates[i];
    f += w[i] * k * std::exp(-k * static_cast<long double>(x));
  }
  return static_cast<double>(f);
}

// E[log2(X + a)] for hypoexponential X. The outer sum runs over the
// components whose label is below `outer_label_limit` (all components when
// negative); the weights always use the full vector. An empty vector means
// X = 0.
inline double log_expectation(const RateVector& v, double a, int outer_label_limit = -1) {
  if (!(a >= 1.0)) throw DomainError("log_expectation: offset must be >= 1, got " + std::to_string(a));
  if (v.empty()) return std::log2(a);
  const auto w = hypoexp_weights(v);
  const long double ln_a = std::log(static_cast<long double>(a));
  long double sum = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (outer_label_limit >= 0 && v.labels[i] >= outer_label_limit) continue;
    const long double term = ln_a - static_cast<long double>(expi_scaled(-a * v.rates[i]));
    sum += w[i] * term;
  }
  return static_cast<double>(sum / std::numbers::ln2_v<long double>);
}

}  // namespace compnoma
