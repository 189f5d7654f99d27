#pragma once

// Closed-form ergodic capacities of a fixed topology.
//
// Each rate is log2(X + a) - log2(Y + a) with X, Y weighted sums of
// exponential link gains, so the ergodic rate is a difference of two
// hypoexponential log expectations. The SM users' capacities use the fading
// average of the BPSK error probability Q(sqrt(rho |h|^2)).

#include <string>
#include <vector>

#include "compnoma/config.hpp"
#include "compnoma/geometry.hpp"
#include "compnoma/hypoexp.hpp"
#include "compnoma/link.hpp"

namespace compnoma {

// `full` expands every component of the N-cell sums; `paper_literal` keeps
// only the coordinated-cell components (label < M) in the outer sums.
enum class SumMode { full, paper_literal };

struct ExactCapacity {
  std::vector<double> ccu_exact;  // cells 0..M-1
  double ceu_exact = 0.0;         // CoMP CEU
  std::vector<double> sm_pe;      // cells 1..M-1
  std::vector<double> sm_exact;   // cells 1..M-1
  double noma_part = 0.0;
  double sm_part = 0.0;
  double esc_exact = 0.0;
  double a = 1.0;  // CCU denominator offset
  double b = 1.0;  // CEU denominator offset
};

struct RatePair {
  RateVector numerator;
  RateVector denominator;
};

namespace detail {

// Adds 1/(share rho var) unless the component carries no power.
inline void push_component(RateVector& v, double share, double rho, double variance, int label) {
  const double scale = share * rho * variance;
  if (scale > 0.0) v.push(1.0 / scale, label);
}

}  // namespace detail

inline RatePair rates_ccu(const Topology& t, const ScenarioConfig& c, int j) {
  if (j < 0 || j >= c.m_comp) throw ConfigError("rates_ccu: CCU index " + std::to_string(j) + " outside [0, M)");
  RatePair p;
  for (int i = 0; i < t.n_cells(); ++i) {
    const double share = i < c.m_comp ? c.alpha : c.alpha + c.beta();
    detail::push_component(p.numerator, share, c.rho, link_variance(t.d_ccu(i, j), c), i);
  }
  p.denominator = p.numerator.without(j);
  return p;
}

inline RatePair rates_ceu(const Topology& t, const ScenarioConfig& c) {
  RatePair p;
  for (int i = 0; i < t.n_cells(); ++i) {
    const double var = link_variance(t.d_ceu(i, 0), c);
    detail::push_component(p.numerator, c.alpha + c.beta(), c.rho, var, i);
    detail::push_component(p.denominator, i < c.m_comp ? c.alpha : c.alpha + c.beta(), c.rho, var, i);
  }
  return p;
}

inline double ccu_offset(const ScenarioConfig& c, int n_cells) {
  return csi_error_power(c, n_cells) + c.rho * c.gamma + 1.0;
}
inline double ceu_offset(const ScenarioConfig& c, int n_cells) { return csi_error_power(c, n_cells) + 1.0; }

inline double ccu_exact(const Topology& t, const ScenarioConfig& c, int j, SumMode mode = SumMode::full) {
  const RatePair p = rates_ccu(t, c, j);
  const double a = ccu_offset(c, t.n_cells());
  const int limit = mode == SumMode::full ? -1 : c.m_comp;
  return log_expectation(regularize(p.numerator), a, limit) - log_expectation(regularize(p.denominator), a, limit);
}

inline double ceu_exact(const Topology& t, const ScenarioConfig& c, SumMode mode = SumMode::full) {
  const RatePair p = rates_ceu(t, c);
  const double b = ceu_offset(c, t.n_cells());
  const int limit = mode == SumMode::full ? -1 : c.m_comp;
  return log_expectation(regularize(p.numerator), b, limit) - log_expectation(regularize(p.denominator), b, limit);
}

// Coordinated SM user (CEU of cell 1), reached through BS 0 and BS 1.
inline double pe_cosm_exact(const Topology& t, const ScenarioConfig& c) {
  if (c.m_comp < 2 || t.n_cells() < 2) throw ConfigError("pe_cosm_exact: needs M >= 2");
  const double d1 = c.rho * link_variance(t.d_ceu(0, 1), c);
  const double d2 = c.rho * link_variance(t.d_ceu(1, 1), c);
  return 0.5 * (average_pe(d1) + average_pe(d2));
}

inline double pe_noncosm_exact(const Topology& t, const ScenarioConfig& c, int cell) {
  if (cell < 2 || cell >= c.m_comp) throw ConfigError("pe_noncosm_exact: SM cell " + std::to_string(cell) + " outside [2, M)");
  return average_pe(c.rho * link_variance(t.d_ceu(cell, cell), c));
}

inline ExactCapacity esc_exact(const Topology& t, const ScenarioConfig& c, SumMode mode = SumMode::full) {
  ExactCapacity out;
  out.a = ccu_offset(c, t.n_cells());
  out.b = ceu_offset(c, t.n_cells());
  for (int j = 0; j < c.m_comp; ++j) out.ccu_exact.push_back(ccu_exact(t, c, j, mode));
  out.ceu_exact = ceu_exact(t, c, mode);
  for (int k = 1; k < c.m_comp; ++k) {
    const double pe = k == 1 ? pe_cosm_exact(t, c) : pe_noncosm_exact(t, c, k);
    out.sm_pe.push_back(pe);
    out.sm_exact.push_back(sm_rate(pe, k, c));
  }
  out.noma_part = out.ceu_exact;
  for (double r : out.ccu_exact) out.noma_part += r;
  for (double r : out.sm_exact) out.sm_part += r;
  out.esc_exact = out.noma_part + out.sm_part;
  return out;
}

}  // namespace compnoma
