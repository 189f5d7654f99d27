#pragma once

// Multi-cell topology: base stations on a hexagonal-row grid with 2R
// spacing, one cell-centre user (CCU) and one cell-edge user (CEU) per cell.
//
// Cell indices are 0-based throughout: cells 0..M-1 are the coordinated
// (CoMP) cells, cell 0's CEU is the CoMP user, cell 1's CEU is the
// coordinated-SM user and cells 2..M-1 host the non-coordinated SM users.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "compnoma/config.hpp"
#include "compnoma/error.hpp"
#include "compnoma/random.hpp"

namespace compnoma {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double ground_distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Row-major (BS index, user index) table.
template <typename T>
class LinkTable {
 public:
  LinkTable() = default;
  LinkTable(int n_bs, int n_users, T fill = T{})
      : n_bs_(n_bs), n_users_(n_users), data_(static_cast<std::size_t>(n_bs) * n_users, fill) {}

  T& operator()(int bs, int user) { return data_[static_cast<std::size_t>(bs) * n_users_ + user]; }
  const T& operator()(int bs, int user) const { return data_[static_cast<std::size_t>(bs) * n_users_ + user]; }

  int n_bs() const { return n_bs_; }
  int n_users() const { return n_users_; }

  bool operator==(const LinkTable&) const = default;

 private:
  int n_bs_ = 0;
  int n_users_ = 0;
  std::vector<T> data_;
};

struct Topology {
  std::vector<Point> bs_positions;
  std::vector<Point> ccu_positions;  // one per cell
  std::vector<Point> ceu_positions;  // one per cell
  LinkTable<double> d_ccu;           // 3-D distance, BS antenna i -> CCU j
  LinkTable<double> d_ceu;           // 3-D distance, BS antenna i -> CEU k

  int n_cells() const { return static_cast<int>(bs_positions.size()); }

  bool operator==(const Topology& o) const {
    auto same = [](const std::vector<Point>& a, const std::vector<Point>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
      return true;
    };
    return same(bs_positions, o.bs_positions) && same(ccu_positions, o.ccu_positions) &&
           same(ceu_positions, o.ceu_positions) && d_ccu == o.d_ccu && d_ceu == o.d_ceu;
  }
};

// Base stations per grid row; rows alternate a half-spacing offset so every
// neighbour (in-row and across rows) sits exactly 2R away.
inline constexpr int kGridColumns = 6;

inline double distance_3d(double ground, double height) { return std::sqrt(ground * ground + height * height); }

// Estimated-channel variance d^-v - sigma_eps. Throws DomainError when the
// estimation error swallows the whole path gain.
inline double estimated_variance(double d, double v, double sigma_eps) {
  if (!(d > 0.0)) throw DomainError("estimated_variance: distance must be positive");
  const double var = std::pow(d, -v) - sigma_eps;
  if (!(var > 0.0))
    throw DomainError("estimated_variance: sigma_eps=" + std::to_string(sigma_eps) +
                      " >= path gain d^-v=" + std::to_string(std::pow(d, -v)) + " at d=" + std::to_string(d));
  return var;
}

// Variance actually used for a link under the configured policy.
inline double link_variance(double d, const ScenarioConfig& c) {
  if (c.variance_policy == VariancePolicy::strict) return estimated_variance(d, c.pathloss_exp, c.sigma_eps);
  return std::max(std::pow(d, -c.pathloss_exp) - c.sigma_eps, 0.0);
}

inline Point bs_grid_position(int index, double radius) {
  const int row = index / kGridColumns;
  const int col = index % kGridColumns;
  const double spacing = 2.0 * radius;
  return {spacing * col + (row % 2 == 1 ? radius : 0.0), row * std::numbers::sqrt3 * radius};
}

namespace detail {

// Uniform in area over the annulus, uniform in angle.
inline Point place_in_annulus(Point centre, const Annulus& band, double radius, CounterRng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r2_lo = band.r_min * band.r_min;
  const double r2_hi = band.r_max * band.r_max;
  const double r = radius * std::sqrt(r2_lo + (r2_hi - r2_lo) * unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return {centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
}

}  // namespace detail

// Builds the topology for `seed`. Each cell draws its users from its own
// stream, so the first cells are identical for any N.
inline Topology build_topology(const ScenarioConfig& c, std::uint64_t seed) {
  validate(c);
  const int n = c.n_cells;
  Topology t;
  t.bs_positions.reserve(n);
  for (int i = 0; i < n; ++i) t.bs_positions.push_back(bs_grid_position(i, c.cell_radius));
  for (int cell = 0; cell < n; ++cell) {
    CounterRng rng(derive_key(seed, {static_cast<std::uint64_t>(StreamTag::topology), static_cast<std::uint64_t>(cell)}));
    t.ccu_positions.push_back(detail::place_in_annulus(t.bs_positions[cell], c.ccu_annulus, c.cell_radius, rng));
    t.ceu_positions.push_back(detail::place_in_annulus(t.bs_positions[cell], c.ceu_annulus, c.cell_radius, rng));
  }
  t.d_ccu = LinkTable<double>(n, n);
  t.d_ceu = LinkTable<double>(n, n);
  for (int i = 0; i < n; ++i) {
    for (int u = 0; u < n; ++u) {
      t.d_ccu(i, u) = distance_3d(ground_distance(t.bs_positions[i], t.ccu_positions[u]), c.bs_height);
      t.d_ceu(i, u) = distance_3d(ground_distance(t.bs_positions[i], t.ceu_positions[u]), c.bs_height);
    }
  }
  return t;
}

// Plotting export: a `bs` block then a `user` block.
inline void write_topology_csv(std::ostream& out, const Topology& t) {
  out.precision(9);
  out << "bs_id,x,y\n";
  for (int i = 0; i < t.n_cells(); ++i) out << i << ',' << t.bs_positions[i].x << ',' << t.bs_positions[i].y << '\n';
  out << "\nuser_id,role,cell,x,y\n";
  int id = 0;
  for (int cell = 0; cell < t.n_cells(); ++cell) {
    out << id++ << ",ccu," << cell << ',' << t.ccu_positions[cell].x << ',' << t.ccu_positions[cell].y << '\n';
    out << id++ << ",ceu," << cell << ',' << t.ceu_positions[cell].x << ',' << t.ceu_positions[cell].y << '\n';
  }
}

}  // namespace compnoma
