#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace hsx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Piecewise-linear initial datum: strictly increasing breakpoints
// zeta_0 < ... < zeta_n, constant slope w0_i on (zeta_i, zeta_{i+1}),
// zero slope outside [zeta_0, zeta_n], u0(zeta_0) = anchor.
//
// Immutable after construction; safe to share across threads.
class InitialProfile {
 public:
  InitialProfile(std::vector<double> breakpoints, std::vector<double> slopes,
                 double anchor);

  std::size_t cell_count() const { return slopes_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double anchor() const { return anchor_; }
  double support_lo() const { return breakpoints_.front(); }
  double support_hi() const { return breakpoints_.back(); }

  // u0 at breakpoint j (cumulative integral of the slopes plus anchor).
  double value_at(std::size_t j) const { return values_[j]; }

  // Exact piecewise-linear interpolation, constant beyond the support.
  double eval_u(double x) const;

  // Cell index i with zeta_i <= zeta < zeta_{i+1}; nullopt outside
  // [zeta_0, zeta_n).
  std::optional<std::size_t> cell_index(double zeta) const;

  // w0(zeta) where it exists: 0 outside the support, the cell slope
  // strictly inside a cell, undefined (nullopt) exactly at breakpoints.
  std::optional<double> slope_at(double zeta) const;

  bool is_breakpoint(double zeta) const;

  double total_energy() const { return total_energy_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  double anchor_ = 0.0;
  std::vector<double> values_;  // u0 at the breakpoints
  double total_energy_ = 0.0;
};

// Per-cell invariants of the initial datum.
struct CellMeta {
  std::size_t index = 0;
  double zeta_lo = 0.0;
  double zeta_hi = 0.0;
  double width = 0.0;        // zeta_hi - zeta_lo
  double slope = 0.0;        // w0 on the open cell
  double energy = 0.0;       // w0^2 * width
  double blowup_time = kInf; // -2/w0 for w0 < 0, +inf otherwise
};

std::vector<CellMeta> cell_meta(const InitialProfile& p);

// Sum of cell energies over cells with blowup_time > t (the surviving
// label set at time t); a cell is excluded from t = T_i onward.
double survivor_mass(const InitialProfile& p, double t);
double survivor_mass(const std::vector<CellMeta>& cells, double t);

}  // namespace hsx
