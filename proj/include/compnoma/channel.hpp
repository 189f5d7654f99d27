#pragma once

// Estimated Rayleigh channel gains under imperfect CSI. Every (BS, user) link
// gets one circularly-symmetric complex Gaussian gain with variance
// d^-v - sigma_eps; both antennas of a BS share it.

#include <complex>
#include <cstdint>
#include <random>

#include "compnoma/config.hpp"
#include "compnoma/geometry.hpp"
#include "compnoma/random.hpp"

namespace compnoma {

using Complex = std::complex<double>;

// Estimated-channel variances of every link of a fixed topology.
struct LinkVariances {
  LinkTable<double> ccu;
  LinkTable<double> ceu;
};

inline LinkVariances link_variances(const Topology& t, const ScenarioConfig& c) {
  const int n = t.n_cells();
  LinkVariances v{LinkTable<double>(n, n), LinkTable<double>(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int u = 0; u < n; ++u) {
      v.ccu(i, u) = link_variance(t.d_ccu(i, u), c);
      v.ceu(i, u) = link_variance(t.d_ceu(i, u), c);
    }
  }
  return v;
}

struct ChannelRealization {
  LinkTable<Complex> h_ccu;  // BS i -> CCU j
  LinkTable<Complex> h_ceu;  // BS i -> CEU k
  double sigma_eps = 0.0;

  int n_cells() const { return h_ccu.n_bs(); }
};

inline double gain(Complex h) { return std::norm(h); }

inline std::uint64_t fading_seed(std::uint64_t master_seed, std::int64_t trial) {
  return derive_key(master_seed, {static_cast<std::uint64_t>(StreamTag::fading), static_cast<std::uint64_t>(trial)});
}

inline ChannelRealization draw_channel(const LinkVariances& variances, double sigma_eps, std::uint64_t trial_seed) {
  const int n = variances.ccu.n_bs();
  ChannelRealization r{LinkTable<Complex>(n, n), LinkTable<Complex>(n, n), sigma_eps};
  CounterRng rng(trial_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](double variance) {
    const double scale = std::sqrt(0.5 * variance);
    const double re = normal(rng);
    const double im = normal(rng);
    return Complex(scale * re, scale * im);
  };
  for (int i = 0; i < n; ++i)
    for (int u = 0; u < n; ++u) r.h_ccu(i, u) = draw(variances.ccu(i, u));
  for (int i = 0; i < n; ++i)
    for (int u = 0; u < n; ++u) r.h_ceu(i, u) = draw(variances.ceu(i, u));
  return r;
}

inline ChannelRealization draw_channel(const Topology& t, const ScenarioConfig& c, std::uint64_t trial_seed) {
  return draw_channel(link_variances(t, c), c.sigma_eps, trial_seed);
}

}  // namespace compnoma
