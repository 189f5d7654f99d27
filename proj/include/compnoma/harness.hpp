#pragma once

// Monte Carlo engine, parameter sweeps, scheme comparison and impairment
// studies.
//
// Trials are grouped into fixed blocks of kBlockTrials; each block is summed
// in trial order and block sums are combined pairwise in block order, so a
// report is bit-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "compnoma/analytic.hpp"
#include "compnoma/channel.hpp"
#include "compnoma/config.hpp"
#include "compnoma/geometry.hpp"
#include "compnoma/link.hpp"

namespace compnoma {

enum class Mode { simulated, exact_full, exact_paper_literal };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::simulated: return "simulated";
    case Mode::exact_full: return "exact_full";
    case Mode::exact_paper_literal: return "exact_paper_literal";
  }
  return "?";
}

struct UserStat {
  std::string role;  // ccu | comp_ceu | cosm | sm | ceu
  int index = 0;     // cell
  double mean = 0.0;
  double std_error = 0.0;
};

struct CapacityReport {
  Scheme scheme = Scheme::proposed;
  Mode mode = Mode::simulated;
  ScenarioConfig config;
  std::string param_name = "rho_db";
  double param_value = 0.0;
  std::vector<UserStat> users;
  double esc_mean = 0.0;
  double esc_stderr = 0.0;
  std::int64_t trials = 0;  // 0 for a single closed-form evaluation
  double wall_seconds = 0.0;

  double ccu_total() const {
    double s = 0.0;
    for (const auto& u : users)
      if (u.role == "ccu") s += u.mean;
    return s;
  }
  double ceu_total() const {
    double s = 0.0;
    for (const auto& u : users)
      if (u.role != "ccu") s += u.mean;
    return s;
  }
  const UserStat& user(const std::string& role, int index) const {
    for (const auto& u : users)
      if (u.role == role && u.index == index) return u;
    throw ConfigError("report has no user " + role + "#" + std::to_string(index));
  }
};

struct RunOptions {
  int threads = 0;  // 0: COMPNOMA_THREADS, else all cores
};

inline int resolve_threads(const RunOptions& opt) {
  if (opt.threads > 0) return opt.threads;
  if (const char* env = std::getenv("COMPNOMA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline constexpr std::int64_t kBlockTrials = 1024;

struct MomentSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;

  explicit MomentSums(std::size_t n = 0) : sum(n, 0.0), sum_sq(n, 0.0) {}

  void add(const MomentSums& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum_sq[i] += o.sum_sq[i];
    }
  }
};

// Runs `trial(index, out)` for every trial, where `out` receives `width`
// values, and returns their sums and sums of squares.
inline MomentSums accumulate_trials(std::int64_t n_trials, std::size_t width,
                                    const std::function<void(std::int64_t, std::span<double>)>& trial,
                                    const RunOptions& opt = {}) {
  const std::int64_t n_blocks = (n_trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<MomentSums> blocks(static_cast<std::size_t>(n_blocks), MomentSums(width));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    std::vector<double> values(width);
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      MomentSums& acc = blocks[static_cast<std::size_t>(b)];
      const std::int64_t end = std::min(n_trials, (b + 1) * kBlockTrials);
      try {
        for (std::int64_t t = b * kBlockTrials; t < end; ++t) {
          trial(t, values);
          for (std::size_t i = 0; i < width; ++i) {
            acc.sum[i] += values[i];
            acc.sum_sq[i] += values[i] * values[i];
          }
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  const int threads = static_cast<int>(std::min<std::int64_t>(resolve_threads(opt), std::max<std::int64_t>(n_blocks, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Pairwise reduction in block order.
  for (std::size_t stride = 1; stride < blocks.size(); stride *= 2)
    for (std::size_t i = 0; i + stride < blocks.size(); i += 2 * stride) blocks[i].add(blocks[i + stride]);
  return blocks.empty() ? MomentSums(width) : blocks.front();
}

inline double mean_of(const MomentSums& m, std::size_t i, std::int64_t n) { return m.sum[i] / static_cast<double>(n); }

inline double stderr_of(const MomentSums& m, std::size_t i, std::int64_t n) {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double var = std::max(0.0, (m.sum_sq[i] - m.sum[i] * m.sum[i] / nn) / (nn - 1.0));
  return std::sqrt(var / nn);
}

namespace detail {

inline std::vector<std::pair<std::string, int>> user_layout(Scheme s, int m) {
  std::vector<std::pair<std::string, int>> out;
  for (int j = 0; j < m; ++j) out.emplace_back("ccu", j);
  if (s == Scheme::proposed) {
    out.emplace_back("comp_ceu", 0);
    for (int k = 1; k < m; ++k) out.emplace_back(k == 1 ? "cosm" : "sm", k);
  } else {
    for (int k = 0; k < m; ++k) out.emplace_back("ceu", k);
  }
  return out;
}

inline void flatten(const UserRates& r, std::span<double> out) {
  std::size_t i = 0;
  double total = 0.0;
  for (double v : r.ccu_rate) total += (out[i++] = v);
  for (double v : r.ceu_rate) total += (out[i++] = v);
  out[i] = total;
}

inline void flatten(const ExactCapacity& e, std::span<double> out) {
  std::size_t i = 0;
  for (double v : e.ccu_exact) out[i++] = v;
  out[i++] = e.ceu_exact;
  for (double v : e.sm_exact) out[i++] = v;
  out[i] = e.esc_exact;
}

inline std::uint64_t placement_seed(std::uint64_t master, std::int64_t trial) {
  return derive_key(master, {3, static_cast<std::uint64_t>(trial)});
}

}  // namespace detail

// One scenario. Simulated mode averages per-trial rates on the topology of
// `master_seed` (or on a fresh topology per trial with redraw_topology).
// Exact modes evaluate the closed forms, averaged over per-trial topologies
// when redraw_topology is set.
inline CapacityReport run_scenario(const ScenarioConfig& c, Scheme scheme, Mode mode, const RunOptions& opt = {}) {
  validate(c);
  if (scheme == Scheme::noma_baseline && mode != Mode::simulated)
    throw ConfigError("the NOMA baseline has no closed form; use simulated mode");
  const auto started = std::chrono::steady_clock::now();
  const auto layout = detail::user_layout(scheme, c.m_comp);
  const std::size_t width = layout.size() + 1;
  const SumMode sum_mode = mode == Mode::exact_paper_literal ? SumMode::paper_literal : SumMode::full;

  CapacityReport rep;
  rep.scheme = scheme;
  rep.mode = mode;
  rep.config = c;
  rep.param_value = linear_to_db(c.rho);

  MomentSums sums(width);
  std::int64_t n = 0;
  if (mode == Mode::simulated) {
    n = c.trials;
    std::function<void(std::int64_t, std::span<double>)> trial;
    if (c.redraw_topology) {
      trial = [&](std::int64_t t, std::span<double> out) {
        const Topology topo = build_topology(c, detail::placement_seed(c.master_seed, t));
        const LinkVariances var = link_variances(topo, c);
        const ChannelRealization r = draw_channel(var, c.sigma_eps, fading_seed(c.master_seed, t));
        detail::flatten(scheme == Scheme::proposed ? trial_rates(r, &var, c) : noma_baseline_rates(r, c), out);
      };
    } else {
      const Topology topo = build_topology(c, c.master_seed);
      const LinkVariances var = link_variances(topo, c);
      trial = [&c, &scheme, var](std::int64_t t, std::span<double> out) {
        const ChannelRealization r = draw_channel(var, c.sigma_eps, fading_seed(c.master_seed, t));
        detail::flatten(scheme == Scheme::proposed ? trial_rates(r, &var, c) : noma_baseline_rates(r, c), out);
      };
    }
    sums = accumulate_trials(n, width, trial, opt);
  } else if (c.redraw_topology) {
    n = c.trials;
    sums = accumulate_trials(
        n, width,
        [&](std::int64_t t, std::span<double> out) {
          detail::flatten(esc_exact(build_topology(c, detail::placement_seed(c.master_seed, t)), c, sum_mode), out);
        },
        opt);
  } else {
    std::vector<double> values(width);
    detail::flatten(esc_exact(build_topology(c, c.master_seed), c, sum_mode), values);
    for (std::size_t i = 0; i < width; ++i) {
      sums.sum[i] = values[i];
      sums.sum_sq[i] = values[i] * values[i];
    }
  }

  const std::int64_t count = std::max<std::int64_t>(n, 1);
  for (std::size_t i = 0; i < layout.size(); ++i)
    rep.users.push_back({layout[i].first, layout[i].second, mean_of(sums, i, count), stderr_of(sums, i, count)});
  rep.esc_mean = 0.0;
  for (const auto& u : rep.users) rep.esc_mean += u.mean;
  rep.esc_stderr = stderr_of(sums, layout.size(), count);
  rep.trials = n;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

enum class SweepParam { rho_db, n_cells, gamma_db, sigma_eps };

inline std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::rho_db: return "rho_db";
    case SweepParam::n_cells: return "n_cells";
    case SweepParam::gamma_db: return "gamma_db";
    case SweepParam::sigma_eps: return "sigma_eps";
  }
  return "?";
}

inline SweepParam parse_sweep_param(const std::string& s) {
  if (s == "rho_db" || s == "rho-db") return SweepParam::rho_db;
  if (s == "n_cells" || s == "n-cells" || s == "n") return SweepParam::n_cells;
  if (s == "gamma_db" || s == "gamma-db") return SweepParam::gamma_db;
  if (s == "sigma_eps" || s == "sigma-eps") return SweepParam::sigma_eps;
  throw ConfigError("unknown sweep parameter '" + s + "'");
}

inline ScenarioConfig with_param(ScenarioConfig c, SweepParam p, double value) {
  switch (p) {
    case SweepParam::rho_db: c.rho = db_to_linear(value); break;
    case SweepParam::gamma_db: c.gamma = db_to_linear(value); break;
    case SweepParam::sigma_eps: c.sigma_eps = value; break;
    case SweepParam::n_cells:
      if (value != std::floor(value)) throw ConfigError("invalid 'n': cell count must be an integer");
      c.n_cells = static_cast<int>(value);
      break;
  }
  validate(c);
  return c;
}

// One report per value; all share the configured master seed.
inline std::vector<CapacityReport> sweep(const ScenarioConfig& c, SweepParam p, const std::vector<double>& values,
                                         Scheme scheme, Mode mode, const RunOptions& opt = {}) {
  std::vector<CapacityReport> out;
  for (double v : values) {
    CapacityReport r = run_scenario(with_param(c, p, v), scheme, mode, opt);
    r.param_name = to_string(p);
    r.param_value = v;
    out.push_back(std::move(r));
  }
  return out;
}

inline double percent_delta(double proposed, double baseline) { return 100.0 * (proposed - baseline) / baseline; }

struct ComparisonRow {
  std::string metric;
  double proposed = 0.0;
  double baseline = 0.0;
  double delta_pct = 0.0;
};

struct SchemeComparison {
  CapacityReport proposed;
  CapacityReport baseline;
  std::vector<ComparisonRow> rows;
};

// Both schemes simulated on identical topologies and fading draws.
inline SchemeComparison compare_schemes(const ScenarioConfig& c, const RunOptions& opt = {}) {
  SchemeComparison cmp{run_scenario(c, Scheme::proposed, Mode::simulated, opt),
                       run_scenario(c, Scheme::noma_baseline, Mode::simulated, opt), {}};
  auto row = [&](std::string metric, double p, double b) { cmp.rows.push_back({std::move(metric), p, b, percent_delta(p, b)}); };
  row("ccu_total", cmp.proposed.ccu_total(), cmp.baseline.ccu_total());
  row("ceu_total", cmp.proposed.ceu_total(), cmp.baseline.ceu_total());
  row("cell0_ceu", cmp.proposed.user("comp_ceu", 0).mean, cmp.baseline.user("ceu", 0).mean);
  row("esc", cmp.proposed.esc_mean, cmp.baseline.esc_mean);
  return cmp;
}

enum class ImpairmentAxis { gamma, sigma_eps };

inline ImpairmentAxis parse_axis(const std::string& s) {
  if (s == "gamma" || s == "gamma_db" || s == "gamma-db") return ImpairmentAxis::gamma;
  if (s == "sigma_eps" || s == "sigma-eps") return ImpairmentAxis::sigma_eps;
  throw ConfigError("unknown degradation axis '" + s + "'");
}

struct DegradationRow {
  std::string axis;
  double value = 0.0;      // gamma in dB, or sigma_eps
  double esc = 0.0;
  double esc_reference = 0.0;
  double relative_change = 0.0;  // esc / reference - 1
  double degradation_pct = 0.0;  // -100 * relative_change
};

// ESC under each impairment level against the unimpaired reference of the
// same axis (gamma = 0 for SIC, sigma_eps = 0 for CSI), all other
// parameters as configured. Uses the proposed scheme.
inline std::vector<DegradationRow> degradation_study(const ScenarioConfig& c, ImpairmentAxis axis,
                                                     const std::vector<double>& values, Mode mode,
                                                     const RunOptions& opt = {}) {
  ScenarioConfig ref = c;
  if (axis == ImpairmentAxis::gamma) ref.gamma = 0.0;
  else ref.sigma_eps = 0.0;
  const double esc_ref = run_scenario(ref, Scheme::proposed, mode, opt).esc_mean;
  std::vector<DegradationRow> out;
  for (double v : values) {
    ScenarioConfig imp = c;
    if (axis == ImpairmentAxis::gamma) imp.gamma = db_to_linear(v);
    else imp.sigma_eps = v;
    const double esc = run_scenario(imp, Scheme::proposed, mode, opt).esc_mean;
    const double rel = esc / esc_ref - 1.0;
    out.push_back({axis == ImpairmentAxis::gamma ? "gamma_db" : "sigma_eps", v, esc, esc_ref, rel, -100.0 * rel});
  }
  return out;
}

struct ValidationRow {
  double rho_db = 0.0;
  double sim_esc = 0.0;
  double sim_stderr = 0.0;
  double exact_esc = 0.0;
  double relative_gap = 0.0;
  double gap_in_stderrs = 0.0;
  bool pass = false;
};

// Simulated vs full closed-form ESC at each SNR; pass iff the relative gap is
// below `tolerance`.
inline std::vector<ValidationRow> validate_against_exact(const ScenarioConfig& c, const std::vector<double>& rho_db,
                                                         double tolerance, const RunOptions& opt = {}) {
  std::vector<ValidationRow> out;
  for (double db : rho_db) {
    const ScenarioConfig s = with_param(c, SweepParam::rho_db, db);
    const CapacityReport sim = run_scenario(s, Scheme::proposed, Mode::simulated, opt);
    const CapacityReport exact = run_scenario(s, Scheme::proposed, Mode::exact_full, opt);
    ValidationRow row;
    row.rho_db = db;
    row.sim_esc = sim.esc_mean;
    row.sim_stderr = sim.esc_stderr;
    row.exact_esc = exact.esc_mean;
    row.relative_gap = std::abs(sim.esc_mean - exact.esc_mean) / exact.esc_mean;
    const double se = std::hypot(sim.esc_stderr, exact.esc_stderr);
    row.gap_in_stderrs = se > 0.0 ? std::abs(sim.esc_mean - exact.esc_mean) / se : 0.0;
    row.pass = row.relative_gap < tolerance;
    out.push_back(row);
  }
  return out;
}

}  // namespace compnoma
