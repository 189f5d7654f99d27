#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "compnoma/error.hpp"

namespace compnoma {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// Radial placement band, as fractions of the cell radius.
struct Annulus {
  double r_min = 0.0;
  double r_max = 1.0;
};

// How a link whose path gain does not exceed the estimation-error variance is
// treated. `strict` rejects it; `floor` gives the estimated channel zero
// variance while the error variance still enters the SINR denominators.
enum class VariancePolicy { strict, floor };

// Error probability used for the simulated SM users: the instantaneous
// Q-function form per realization, or the fading-averaged closed form.
enum class SmPeForm { instantaneous, average };

struct ScenarioConfig {
  int n_cells = 12;
  int m_comp = 3;
  double cell_radius = 1.0;
  double bs_height = 0.01;
  double alpha = 0.1;
  double rho = 100.0;              // transmit SNR, linear
  double sigma_eps = 0.01;         // estimation-error variance, every link
  double gamma = 0.0031622776601683794;  // residual SIC factor, linear (-25 dB)
  double pathloss_exp = 3.0;
  int antennas_per_bs = 2;
  std::int64_t trials = 100000;
  std::uint64_t master_seed = 1;
  Annulus ccu_annulus{0.1, 0.5};
  Annulus ceu_annulus{0.9, 1.0};
  VariancePolicy variance_policy = VariancePolicy::floor;
  SmPeForm sm_pe_form = SmPeForm::instantaneous;
  bool redraw_topology = false;

  double beta() const { return 1.0 - alpha; }
};

inline std::string to_string(VariancePolicy p) { return p == VariancePolicy::strict ? "strict" : "floor"; }
inline std::string to_string(SmPeForm f) { return f == SmPeForm::instantaneous ? "instantaneous" : "average"; }

inline void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("invalid '" + key + "': " + why);
  };
  if (c.n_cells < 1) fail("n", "need at least one cell");
  if (c.m_comp < 2 || c.m_comp > c.n_cells) fail("m", "require 2 <= M <= N");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail("alpha", "require 0 < alpha < 1");
  if (!(c.rho >= 0.0) || std::isinf(c.rho)) fail("rho", "must be finite and >= 0");
  if (!(c.sigma_eps >= 0.0)) fail("sigma_eps", "must be >= 0");
  if (!(c.gamma >= 0.0) || std::isinf(c.gamma)) fail("gamma", "must be finite and >= 0");
  if (!(c.pathloss_exp > 0.0)) fail("pathloss_exp", "must be > 0");
  if (!(c.cell_radius > 0.0)) fail("cell_radius", "must be > 0");
  if (!(c.bs_height > 0.0)) fail("bs_height", "must be > 0");
  if (c.antennas_per_bs < 2) fail("antennas_per_bs", "SSK needs at least two antennas");
  if (c.trials < 1) fail("trials", "must be >= 1");
  auto check_annulus = [&](const Annulus& a, const std::string& key) {
    if (!(a.r_min >= 0.0 && a.r_min < a.r_max && a.r_max <= 1.0))
      fail(key, "require 0 <= r_min < r_max <= 1");
  };
  check_annulus(c.ccu_annulus, "ccu_annulus");
  check_annulus(c.ceu_annulus, "ceu_annulus");
  if (!(c.ccu_annulus.r_max < c.ceu_annulus.r_min))
    fail("ccu_annulus", "CCU band must lie strictly inside the CEU band");
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof())
    throw ConfigError("invalid '" + key + "': cannot parse '" + value + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError("invalid '" + key + "': expected a boolean, got '" + value + "'");
}

}  // namespace detail

// Sets one parameter by name. Keys accept '-' or '_' as separators. Decibel
// keys (rho_db, gamma_db) are converted with 10^(x/10).
inline void apply_setting(ScenarioConfig& c, std::string key, const std::string& value) {
  for (char& ch : key)
    if (ch == '-') ch = '_';
  using detail::parse_number;
  if (key == "n" || key == "n_cells") c.n_cells = parse_number<int>(key, value);
  else if (key == "m" || key == "m_comp") c.m_comp = parse_number<int>(key, value);
  else if (key == "alpha") c.alpha = parse_number<double>(key, value);
  else if (key == "rho") c.rho = parse_number<double>(key, value);
  else if (key == "rho_db") c.rho = db_to_linear(parse_number<double>(key, value));
  else if (key == "sigma_eps") c.sigma_eps = parse_number<double>(key, value);
  else if (key == "gamma") c.gamma = parse_number<double>(key, value);
  else if (key == "gamma_db") c.gamma = db_to_linear(parse_number<double>(key, value));
  else if (key == "pathloss_exp" || key == "v") c.pathloss_exp = parse_number<double>(key, value);
  else if (key == "cell_radius") c.cell_radius = parse_number<double>(key, value);
  else if (key == "bs_height") c.bs_height = parse_number<double>(key, value);
  else if (key == "antennas_per_bs") c.antennas_per_bs = parse_number<int>(key, value);
  else if (key == "trials") c.trials = parse_number<std::int64_t>(key, value);
  else if (key == "seed" || key == "master_seed") c.master_seed = parse_number<std::uint64_t>(key, value);
  else if (key == "ccu_r_min") c.ccu_annulus.r_min = parse_number<double>(key, value);
  else if (key == "ccu_r_max") c.ccu_annulus.r_max = parse_number<double>(key, value);
  else if (key == "ceu_r_min") c.ceu_annulus.r_min = parse_number<double>(key, value);
  else if (key == "ceu_r_max") c.ceu_annulus.r_max = parse_number<double>(key, value);
  else if (key == "redraw_topology") c.redraw_topology = detail::parse_bool(key, value);
  else if (key == "variance_policy") {
    if (value == "strict") c.variance_policy = VariancePolicy::strict;
    else if (value == "floor") c.variance_policy = VariancePolicy::floor;
    else throw ConfigError("invalid 'variance_policy': expected strict|floor, got '" + value + "'");
  } else if (key == "sm_pe") {
    if (value == "instantaneous") c.sm_pe_form = SmPeForm::instantaneous;
    else if (value == "average") c.sm_pe_form = SmPeForm::average;
    else throw ConfigError("invalid 'sm_pe': expected instantaneous|average, got '" + value + "'");
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

// Parses `key = value` lines; '#' starts a comment.
inline void load_config_stream(std::istream& in, ScenarioConfig& c, const std::string& source = "<config>") {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    apply_setting(c, detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
  }
}

inline void load_config_file(const std::string& path, ScenarioConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  load_config_stream(in, c, path);
}

}  // namespace compnoma
