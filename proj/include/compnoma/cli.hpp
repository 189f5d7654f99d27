#pragma once

// Command-line front end. Precedence: built-in defaults < --config file <
// --set key=value < dedicated flags.
//
// Exit codes: 0 success, 1 validation gap above tolerance, 2 usage or
// configuration error, 3 numerical-domain error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "compnoma/config.hpp"
#include "compnoma/error.hpp"
#include "compnoma/geometry.hpp"
#include "compnoma/harness.hpp"
#include "compnoma/report_io.hpp"

namespace compnoma {

struct RunManifest {
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;  // "key=value", in application order
  std::string output_dir = ".";
  std::vector<std::string> emitted_files;
};

struct DispatchResult {
  int exit_code = 0;
  RunManifest manifest;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;

// "lo:hi:step" (inclusive) or a comma-separated list.
inline std::vector<double> parse_values(const std::string& text) {
  auto num = [&](const std::string& s) { return detail::parse_number<double>("values", detail::trim(s)); };
  std::vector<double> out;
  if (detail::trim(text).empty()) return out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("invalid 'values': expected lo:hi:step, got '" + text + "'");
    const double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
    if (!(step > 0.0) || hi < lo) throw ConfigError("invalid 'values': need step > 0 and hi >= lo");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
  return out;
}

struct ModeSelection {
  std::vector<Mode> modes;
  bool includes_simulated() const {
    for (Mode m : modes)
      if (m == Mode::simulated) return true;
    return false;
  }
};

inline ModeSelection parse_mode(const std::string& s) {
  if (s == "sim") return {{Mode::simulated}};
  if (s == "exact") return {{Mode::exact_full}};
  if (s == "exact-paper-literal") return {{Mode::exact_paper_literal}};
  if (s == "both") return {{Mode::simulated, Mode::exact_full}};
  throw ConfigError("invalid 'mode': expected sim|exact|exact-paper-literal|both, got '" + s + "'");
}

namespace detail {

inline std::string iso_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline nlohmann::json config_json(const ScenarioConfig& c) {
  return {{"n_cells", c.n_cells},
          {"m_comp", c.m_comp},
          {"cell_radius", c.cell_radius},
          {"bs_height", c.bs_height},
          {"alpha", c.alpha},
          {"rho", c.rho},
          {"sigma_eps", c.sigma_eps},
          {"gamma", c.gamma},
          {"pathloss_exp", c.pathloss_exp},
          {"antennas_per_bs", c.antennas_per_bs},
          {"trials", c.trials},
          {"master_seed", c.master_seed},
          {"ccu_annulus", {c.ccu_annulus.r_min, c.ccu_annulus.r_max}},
          {"ceu_annulus", {c.ceu_annulus.r_min, c.ceu_annulus.r_max}},
          {"variance_policy", to_string(c.variance_policy)},
          {"sm_pe", to_string(c.sm_pe_form)},
          {"redraw_topology", c.redraw_topology}};
}

}  // namespace detail

class Dispatcher {
 public:
  Dispatcher(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  DispatchResult run(std::vector<std::string> args) {
    DispatchResult result;
    CLI::App app{"Multi-cell JT-CoMP NOMA with spatial modulation: capacity simulator and closed-form validator",
                 "compnoma"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    add_common_options(app);

    auto* run_cmd = app.add_subcommand("run", "simulate and/or evaluate one scenario");
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter; emits a CSV and a plot script");
    sweep_cmd->add_option("--param", sweep_param_, "rho_db | n_cells | gamma_db | sigma_eps")->required();
    sweep_cmd->add_option("--values", values_, "lo:hi:step or comma list")->required();
    sweep_cmd->add_option("--metric", metric_, "quantity the plot script draws: ccu | ceu | esc");
    auto* compare_cmd = app.add_subcommand("compare", "proposed scheme vs the NOMA baseline (simulated)");
    auto* degrade_cmd = app.add_subcommand("degrade", "ESC degradation under imperfect SIC or CSI");
    degrade_cmd->add_option("--axis", axis_, "gamma | sigma_eps")->required();
    degrade_cmd->add_option("--values", values_, "gamma in dB or sigma_eps values");
    auto* validate_cmd = app.add_subcommand("validate", "Monte Carlo ESC vs closed form");
    validate_cmd->add_option("--rho-values", rho_values_, "SNRs in dB (lo:hi:step or list)");
    validate_cmd->add_option("--tolerance", tolerance_, "relative ESC gap tolerance");
    auto* topology_cmd = app.add_subcommand("topology", "export the scenario topology as CSV");

    if (args.empty()) {
      err_ << app.help();
      result.exit_code = kExitConfig;
      return result;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return result;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      result.exit_code = kExitConfig;
      return result;
    }
    if (app.get_subcommands().empty()) {
      err_ << app.help();
      result.exit_code = kExitConfig;
      return result;
    }

    RunManifest& m = result.manifest;
    m.command = app.get_subcommands().front()->get_name();
    m.config_path = config_path_;
    m.output_dir = out_dir_;
    const auto started = std::chrono::system_clock::now();
    try {
      ScenarioConfig cfg = build_config(m);
      validate(cfg);
      std::filesystem::create_directories(out_dir_);
      if (run_cmd->parsed()) result.exit_code = do_run(cfg, m);
      else if (sweep_cmd->parsed()) result.exit_code = do_sweep(cfg, m);
      else if (compare_cmd->parsed()) result.exit_code = do_compare(cfg, m);
      else if (degrade_cmd->parsed()) result.exit_code = do_degrade(cfg, m);
      else if (validate_cmd->parsed()) result.exit_code = do_validate(cfg, m);
      else if (topology_cmd->parsed()) result.exit_code = do_topology(cfg, m);
      write_manifest(m, cfg, started, result.exit_code);
    } catch (const ConfigError& e) {
      err_ << "config error: " << e.what() << "\n";
      result.exit_code = kExitConfig;
    } catch (const DomainError& e) {
      err_ << "numerical domain error: " << e.what() << "\n";
      result.exit_code = kExitDomain;
    }
    return result;
  }

 private:
  void add_common_options(CLI::App& app) {
    app.add_option("--config", config_path_, "key = value scenario file");
    app.add_option("--set", sets_, "extra key=value override (repeatable)");
    app.add_option("--m", m_, "coordinated cells M");
    app.add_option("--n", n_, "cells N");
    app.add_option("--alpha", alpha_, "CCU power share (default 0.1)");
    app.add_option("--rho-db", rho_db_, "transmit SNR in dB");
    app.add_option("--sigma-eps", sigma_eps_, "channel estimation error variance");
    app.add_option("--gamma-db", gamma_db_, "residual SIC factor in dB");
    app.add_option("--pathloss-exp", pathloss_exp_, "path-loss exponent (default 3)");
    app.add_option("--trials", trials_, "Monte Carlo trials");
    app.add_option("--seed", seed_, "master seed");
    app.add_flag("--redraw-topology", redraw_, "fresh user placement per trial");
    app.add_option("--mode", mode_, "sim | exact | exact-paper-literal | both");
    app.add_option("--out", out_dir_, "output directory");
    app.add_option("--threads", threads_, "worker threads (default: COMPNOMA_THREADS or all cores)");
  }

  ScenarioConfig build_config(RunManifest& m) {
    ScenarioConfig c;
    if (!config_path_.empty()) load_config_file(config_path_, c);
    auto set = [&](const std::string& key, const std::string& value) {
      apply_setting(c, key, value);
      m.overrides.push_back(key + "=" + value);
    };
    for (const auto& kv : sets_) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      set(detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
    }
    auto opt = [&](const char* key, const std::optional<std::string>& v) {
      if (v) set(key, *v);
    };
    opt("m", m_);
    opt("n", n_);
    opt("alpha", alpha_);
    opt("rho_db", rho_db_);
    opt("sigma_eps", sigma_eps_);
    opt("gamma_db", gamma_db_);
    opt("pathloss_exp", pathloss_exp_);
    opt("trials", trials_);
    opt("seed", seed_);
    if (redraw_) set("redraw_topology", "true");
    return c;
  }

  RunOptions run_options() const { return RunOptions{threads_}; }

  std::string emit(RunManifest& m, const std::string& name, const std::string& content) {
    const auto path = std::filesystem::path(out_dir_) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << content;
    m.emitted_files.push_back(path.string());
    return path.string();
  }

  std::vector<CapacityReport> reports_for(const ModeSelection& sel,
                                          const std::function<std::vector<CapacityReport>(Scheme, Mode)>& produce) {
    std::vector<CapacityReport> all;
    for (Mode mode : sel.modes)
      for (auto& r : produce(Scheme::proposed, mode)) all.push_back(std::move(r));
    if (sel.includes_simulated())
      for (auto& r : produce(Scheme::noma_baseline, Mode::simulated)) all.push_back(std::move(r));
    return all;
  }

  int do_run(const ScenarioConfig& c, RunManifest& m) {
    const auto reports = reports_for(parse_mode(mode_), [&](Scheme s, Mode md) {
      return std::vector<CapacityReport>{run_scenario(c, s, md, run_options())};
    });
    std::ostringstream csv;
    write_reports_csv(csv, reports);
    const auto path = emit(m, "run.csv", csv.str());
    for (const auto& r : reports)
      out_ << to_string(r.scheme) << " / " << to_string(r.mode) << ": ESC = " << fmt9(r.esc_mean) << " +/- "
           << fmt9(r.esc_stderr) << " bit/s/Hz\n";
    out_ << "wrote " << path << "\n";
    return kExitOk;
  }

  int do_sweep(const ScenarioConfig& c, RunManifest& m) {
    const SweepParam p = parse_sweep_param(sweep_param_);
    const auto values = parse_values(values_);
    const auto reports = reports_for(parse_mode(mode_), [&](Scheme s, Mode md) {
      return sweep(c, p, values, s, md, run_options());
    });
    const std::string stem = "sweep_" + to_string(p);
    std::ostringstream csv;
    write_reports_csv(csv, reports);
    emit(m, stem + ".csv", csv.str());
    if (metric_ != "ccu" && metric_ != "ceu" && metric_ != "esc")
      throw ConfigError("invalid 'metric': expected ccu|ceu|esc, got '" + metric_ + "'");
    const std::string x_label = p == SweepParam::rho_db     ? "transmit SNR rho (dB)"
                                : p == SweepParam::n_cells  ? "number of cells N"
                                : p == SweepParam::gamma_db ? "residual SIC gamma (dB)"
                                                            : "estimation error variance";
    std::ostringstream script;
    write_plot_script(script, stem + ".csv", metric_, x_label,
                      "M=" + std::to_string(c.m_comp) + ", N=" + std::to_string(c.n_cells));
    emit(m, "plot_" + stem + ".py", script.str());
    out_ << "swept " << to_string(p) << " over " << values.size() << " values; wrote " << stem << ".csv\n";
    return kExitOk;
  }

  int do_compare(const ScenarioConfig& c, RunManifest& m) {
    const SchemeComparison cmp = compare_schemes(c, run_options());
    std::ostringstream csv;
    write_comparison_csv(csv, cmp);
    emit(m, "compare.csv", csv.str());
    for (const auto& row : cmp.rows)
      out_ << std::left << std::setw(10) << row.metric << " proposed " << fmt9(row.proposed) << "  baseline "
           << fmt9(row.baseline) << "  delta " << fmt9(row.delta_pct) << "%\n";
    return kExitOk;
  }

  int do_degrade(const ScenarioConfig& c, RunManifest& m) {
    const ImpairmentAxis axis = parse_axis(axis_);
    std::vector<double> values = parse_values(values_);
    if (values.empty()) values = axis == ImpairmentAxis::gamma ? std::vector<double>{-25.0, -15.0} : std::vector<double>{0.01, 0.02};
    const ModeSelection sel = parse_mode(mode_ == "both" ? "exact" : mode_);
    const auto rows = degradation_study(c, axis, values, sel.modes.front(), run_options());
    std::ostringstream csv;
    write_degradation_csv(csv, rows);
    emit(m, std::string("degrade_") + (axis == ImpairmentAxis::gamma ? "gamma" : "sigma_eps") + ".csv", csv.str());
    for (const auto& r : rows) out_ << r.axis << "=" << fmt9(r.value) << ": degradation " << fmt9(r.degradation_pct) << "%\n";
    return kExitOk;
  }

  int do_validate(const ScenarioConfig& c, RunManifest& m) {
    const auto rho = parse_values(rho_values_);
    const auto rows = validate_against_exact(c, rho, tolerance_, run_options());
    std::ostringstream csv;
    write_validation_csv(csv, rows);
    emit(m, "validate.csv", csv.str());
    bool ok = true;
    for (const auto& r : rows) {
      out_ << "rho=" << fmt9(r.rho_db) << " dB  sim " << fmt9(r.sim_esc) << "  exact " << fmt9(r.exact_esc) << "  gap "
           << fmt9(100.0 * r.relative_gap) << "%  " << (r.pass ? "PASS" : "FAIL") << "\n";
      ok = ok && r.pass;
    }
    return ok ? kExitOk : kExitValidationFailed;
  }

  int do_topology(const ScenarioConfig& c, RunManifest& m) {
    std::ostringstream csv;
    write_topology_csv(csv, build_topology(c, c.master_seed));
    const auto path = emit(m, "topology.csv", csv.str());
    out_ << "wrote " << path << "\n";
    return kExitOk;
  }

  void write_manifest(const RunManifest& m, const ScenarioConfig& c, std::chrono::system_clock::time_point started,
                      int exit_code) {
    const auto finished = std::chrono::system_clock::now();
    nlohmann::json j{{"command", m.command},
                     {"config_path", m.config_path},
                     {"overrides", m.overrides},
                     {"output_dir", m.output_dir},
                     {"emitted_files", m.emitted_files},
                     {"config", detail::config_json(c)},
                     {"exit_code", exit_code},
                     {"started_utc", detail::iso_timestamp(started)},
                     {"finished_utc", detail::iso_timestamp(finished)},
                     {"wall_seconds", std::chrono::duration<double>(finished - started).count()}};
    std::ofstream f(std::filesystem::path(out_dir_) / "manifest.json", std::ios::trunc);
    f << j.dump(2) << "\n";
  }

  std::ostream& out_;
  std::ostream& err_;

  std::string config_path_;
  std::vector<std::string> sets_;
  std::optional<std::string> m_, n_, alpha_, rho_db_, sigma_eps_, gamma_db_, pathloss_exp_, trials_, seed_;
  bool redraw_ = false;
  std::string mode_ = "sim";
  std::string out_dir_ = ".";
  int threads_ = 0;
  std::string sweep_param_;
  std::string values_;
  std::string metric_ = "esc";
  std::string axis_;
  std::string rho_values_ = "10,20,30";
  double tolerance_ = 0.02;
};

inline DispatchResult parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Dispatcher(out, err).run(args);
}

}  // namespace compnoma
