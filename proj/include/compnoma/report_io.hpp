#pragma once

// CSV emission for reports and tables, plus generated matplotlib scripts.
// Floats are printed with 9 significant digits; nothing time-dependent goes
// into a CSV.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "compnoma/harness.hpp"

namespace compnoma {

inline std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline constexpr const char* kReportCsvHeader =
    "scheme,mode,param_name,param_value,user_role,user_index,mean_bps_hz,stderr,esc_mean,esc_stderr,trials,seed";

// One row per user plus an `esc` row per report.
inline void write_reports_csv(std::ostream& out, const std::vector<CapacityReport>& reports) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : reports) {
    const std::string prefix = to_string(r.scheme) + ',' + to_string(r.mode) + ',' + r.param_name + ',' + fmt9(r.param_value) + ',';
    const std::string suffix = ',' + fmt9(r.esc_mean) + ',' + fmt9(r.esc_stderr) + ',' + std::to_string(r.trials) + ',' +
                               std::to_string(r.config.master_seed) + '\n';
    for (const auto& u : r.users)
      out << prefix << u.role << ',' << u.index << ',' << fmt9(u.mean) << ',' << fmt9(u.std_error) << suffix;
    out << prefix << "esc,-1," << fmt9(r.esc_mean) << ',' << fmt9(r.esc_stderr) << suffix;
  }
}

inline void write_comparison_csv(std::ostream& out, const SchemeComparison& cmp) {
  out << "metric,proposed_bps_hz,baseline_bps_hz,delta_pct\n";
  for (const auto& row : cmp.rows)
    out << row.metric << ',' << fmt9(row.proposed) << ',' << fmt9(row.baseline) << ',' << fmt9(row.delta_pct) << '\n';
}

inline void write_degradation_csv(std::ostream& out, const std::vector<DegradationRow>& rows) {
  out << "axis,value,esc,esc_reference,relative_change,degradation_pct\n";
  for (const auto& r : rows)
    out << r.axis << ',' << fmt9(r.value) << ',' << fmt9(r.esc) << ',' << fmt9(r.esc_reference) << ','
        << fmt9(r.relative_change) << ',' << fmt9(r.degradation_pct) << '\n';
}

inline void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows) {
  out << "rho_db,sim_esc,sim_stderr,exact_esc,relative_gap,gap_in_stderrs,pass\n";
  for (const auto& r : rows)
    out << fmt9(r.rho_db) << ',' << fmt9(r.sim_esc) << ',' << fmt9(r.sim_stderr) << ',' << fmt9(r.exact_esc) << ','
        << fmt9(r.relative_gap) << ',' << fmt9(r.gap_in_stderrs) << ',' << (r.pass ? 1 : 0) << '\n';
}

// metric: ccu | ceu | esc. The script reads only `csv_name`, from its own directory.
inline void write_plot_script(std::ostream& out, const std::string& csv_name, const std::string& metric,
                              const std::string& x_label, const std::string& title) {
  out << R"py(#!/usr/bin/env python3
# Generated plot script; reads only the CSV named below.
import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
)py";
  out << "CSV = \"" << csv_name << "\"\n";
  out << "METRIC = \"" << metric << "\"\n";
  out << "XLABEL = \"" << x_label << "\"\n";
  out << "TITLE = \"" << title << "\"\n";
  out << R"py(

def wanted(role):
    if METRIC == "esc":
        return role == "esc"
    if METRIC == "ccu":
        return role == "ccu"
    return role not in ("ccu", "esc")


series = defaultdict(lambda: defaultdict(float))
with open(os.path.join(HERE, CSV), newline="") as f:
    for row in csv.DictReader(f):
        if wanted(row["user_role"]):
            key = f'{row["scheme"]} ({row["mode"]})'
            series[key][float(row["param_value"])] += float(row["mean_bps_hz"])

fig, ax = plt.subplots(figsize=(6, 4.5))
for key in sorted(series):
    xs = sorted(series[key])
    marker = "o" if "simulated" in key else "--"
    ax.plot(xs, [series[key][x] for x in xs], marker, label=key)
ax.set_xlabel(XLABEL)
ax.set_ylabel({"esc": "ESC", "ccu": "CCU capacity", "ceu": "CEU capacity"}[METRIC] + " (bit/s/Hz)")
ax.set_title(TITLE)
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, os.path.splitext(CSV)[0] + ".png"), dpi=150)
)py";
}

}  // namespace compnoma
