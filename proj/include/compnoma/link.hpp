#pragma once

// Per-realization SINRs, Shannon rates and SM error probabilities.
//
// Proposed scheme, for M coordinated cells out of N:
//  - CCU j (cell j < M) decodes after SIC; the coordinated BSs interfere only
//    with their CCU share alpha, the other BSs at full power.
//  - CEU 0 is served jointly by all M coordinated BSs with share beta.
//  - CEU 1 is the coordinated SM user (antenna indices of BS 0 and BS 1);
//    CEU k >= 2 are plain SSK users of BS k.
//
// The NOMA baseline serves CCU j / CEU j of each of the first M cells with
// single-cell NOMA and full-power interference from every other BS.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "compnoma/channel.hpp"
#include "compnoma/config.hpp"
#include "compnoma/error.hpp"
#include "compnoma/specfun.hpp"

namespace compnoma {

enum class Scheme { proposed, noma_baseline };

inline std::string to_string(Scheme s) { return s == Scheme::proposed ? "proposed" : "noma_baseline"; }

struct UserRates {
  Scheme scheme = Scheme::proposed;
  std::vector<double> ccu_rate;  // cells 0..M-1
  // Proposed: [0] CoMP CEU, [1] coordinated SM user, [2..] non-coordinated SM users.
  // Baseline: CEU of each cell 0..M-1.
  std::vector<double> ceu_rate;

  double ccu_sum() const { return std::accumulate(ccu_rate.begin(), ccu_rate.end(), 0.0); }
  double ceu_sum() const { return std::accumulate(ceu_rate.begin(), ceu_rate.end(), 0.0); }

  // JT-CoMP NOMA part: all CCUs plus the CoMP CEU.
  double noma_part() const { return ccu_sum() + (ceu_rate.empty() ? 0.0 : ceu_rate.front()); }
  double sm_part() const { return ceu_rate.empty() ? 0.0 : std::accumulate(ceu_rate.begin() + 1, ceu_rate.end(), 0.0); }
  double total() const { return noma_part() + sm_part(); }
};

inline double rate(double sinr) {
  if (!(sinr >= 0.0)) throw DomainError("rate: SINR must be >= 0");
  return std::log2(1.0 + sinr);
}

// rho * sum over all N links of the estimation-error variance.
inline double csi_error_power(const ScenarioConfig& c, int n_cells) { return c.rho * n_cells * c.sigma_eps; }

inline double sinr_ccu(const ChannelRealization& r, int j, const ScenarioConfig& c) {
  const int n = r.n_cells();
  const int m = std::min(c.m_comp, n);
  if (j < 0 || j >= m) throw ConfigError("sinr_ccu: CCU index " + std::to_string(j) + " outside [0, M)");
  double comp_ici = 0.0;
  for (int i = 0; i < m; ++i)
    if (i != j) comp_ici += gain(r.h_ccu(i, j));
  double other_ici = 0.0;
  for (int i = m; i < n; ++i) other_ici += gain(r.h_ccu(i, j));
  const double denom = c.alpha * c.rho * comp_ici + c.rho * other_ici + csi_error_power(c, n) + c.rho * c.gamma + 1.0;
  return c.alpha * c.rho * gain(r.h_ccu(j, j)) / denom;
}

// SINR of the CoMP CEU (CEU of cell 0). Interference from uncoordinated BSs
// is taken over the CEU's own links.
inline double sinr_comp_ceu(const ChannelRealization& r, const ScenarioConfig& c) {
  const int n = r.n_cells();
  const int m = std::min(c.m_comp, n);
  double joint = 0.0;
  for (int i = 0; i < m; ++i) joint += gain(r.h_ceu(i, 0));
  double other_ici = 0.0;
  for (int i = m; i < n; ++i) other_ici += gain(r.h_ceu(i, 0));
  const double denom = c.alpha * c.rho * joint + c.rho * other_ici + csi_error_power(c, n) + 1.0;
  return c.beta() * c.rho * joint / denom;
}

inline double inst_pe_noncosm(double delta) { return q_func(std::sqrt(delta)); }

inline double inst_pe_cosm(double delta1, double delta2) {
  return 0.5 * (q_func(std::sqrt(delta1)) + q_func(std::sqrt(delta2)));
}

// Fading average of Q(sqrt(delta)) for exponential delta with the given mean.
inline double average_pe(double mean_snr) { return 0.5 * (1.0 - std::sqrt(mean_snr / (2.0 + mean_snr))); }

// Antenna-index bits per channel use: the coordinated SM user (cell 1) can
// pick among the antennas of two BSs, the others among one BS's antennas.
inline int sm_bit_budget(int cell, const ScenarioConfig& c) {
  if (cell < 1 || cell >= c.m_comp) throw ConfigError("sm_bit_budget: SM user cell " + std::to_string(cell) + " outside [1, M)");
  const int antennas = cell == 1 ? 2 * c.antennas_per_bs : c.antennas_per_bs;
  return static_cast<int>(std::floor(std::log2(static_cast<double>(antennas))));
}

inline double sm_rate(double pe, int cell, const ScenarioConfig& c) {
  if (!(pe >= 0.0 && pe <= 1.0)) throw DomainError("sm_rate: probability outside [0, 1]");
  return (1.0 - pe) * sm_bit_budget(cell, c);
}

// Error probability of SM user `cell` for one realization. `variances` is
// only consulted for SmPeForm::average.
inline double sm_error_probability(const ChannelRealization& r, int cell, const ScenarioConfig& c,
                                   const LinkVariances* variances) {
  if (c.sm_pe_form == SmPeForm::average) {
    if (variances == nullptr) throw ConfigError("sm_error_probability: average form needs link variances");
    if (cell == 1)
      return 0.5 * (average_pe(c.rho * variances->ceu(0, 1)) + average_pe(c.rho * variances->ceu(1, 1)));
    return average_pe(c.rho * variances->ceu(cell, cell));
  }
  if (cell == 1) return inst_pe_cosm(c.rho * gain(r.h_ceu(0, 1)), c.rho * gain(r.h_ceu(1, 1)));
  return inst_pe_noncosm(c.rho * gain(r.h_ceu(cell, cell)));
}

inline UserRates trial_rates(const ChannelRealization& r, const LinkVariances* variances, const ScenarioConfig& c) {
  const int m = std::min(c.m_comp, r.n_cells());
  UserRates out;
  out.scheme = Scheme::proposed;
  out.ccu_rate.reserve(m);
  for (int j = 0; j < m; ++j) out.ccu_rate.push_back(rate(sinr_ccu(r, j, c)));
  out.ceu_rate.reserve(m);
  out.ceu_rate.push_back(rate(sinr_comp_ceu(r, c)));
  for (int k = 1; k < m; ++k) out.ceu_rate.push_back(sm_rate(sm_error_probability(r, k, c, variances), k, c));
  return out;
}

inline UserRates trial_rates(const ChannelRealization& r, const Topology& t, const ScenarioConfig& c) {
  if (c.sm_pe_form == SmPeForm::average) {
    const LinkVariances v = link_variances(t, c);
    return trial_rates(r, &v, c);
  }
  return trial_rates(r, static_cast<const LinkVariances*>(nullptr), c);
}

inline UserRates noma_baseline_rates(const ChannelRealization& r, const ScenarioConfig& c) {
  const int n = r.n_cells();
  const int m = std::min(c.m_comp, n);
  const double csi = csi_error_power(c, n);
  UserRates out;
  out.scheme = Scheme::noma_baseline;
  for (int j = 0; j < m; ++j) {
    double ici = 0.0;
    for (int i = 0; i < n; ++i)
      if (i != j) ici += gain(r.h_ccu(i, j));
    const double denom = c.rho * ici + csi + c.rho * c.gamma + 1.0;
    out.ccu_rate.push_back(rate(c.alpha * c.rho * gain(r.h_ccu(j, j)) / denom));
  }
  for (int k = 0; k < m; ++k) {
    const double own = gain(r.h_ceu(k, k));
    double ici = 0.0;
    for (int i = 0; i < n; ++i)
      if (i != k) ici += gain(r.h_ceu(i, k));
    const double denom = c.alpha * c.rho * own + c.rho * ici + csi + 1.0;
    out.ceu_rate.push_back(rate(c.beta() * c.rho * own / denom));
  }
  return out;
}

inline UserRates noma_baseline_rates(const ChannelRealization& r, const Topology&, const ScenarioConfig& c) {
  return noma_baseline_rates(r, c);
}

}  // namespace compnoma
