#include "hsx/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hsx {

InitialProfile::InitialProfile(std::vector<double> breakpoints,
                               std::vector<double> slopes, double anchor)
    : breakpoints_(std::move(breakpoints)),
      slopes_(std::move(slopes)),
      anchor_(anchor) {
  if (breakpoints_.size() < 2) {
    throw std::invalid_argument("profile: need at least two breakpoints");
  }
  if (slopes_.size() + 1 != breakpoints_.size()) {
    throw std::invalid_argument(
        "profile: slopes count must equal breakpoints count minus one");
  }
  if (!std::isfinite(anchor_)) {
    throw std::invalid_argument("profile: anchor must be finite");
  }
  for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
    if (!std::isfinite(breakpoints_[j])) {
      throw std::invalid_argument("profile: breakpoint " + std::to_string(j) +
                                  " is not finite");
    }
    if (j > 0 && !(breakpoints_[j - 1] < breakpoints_[j])) {
      throw std::invalid_argument(
          "profile: breakpoints not strictly increasing at index " +
          std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    if (!std::isfinite(slopes_[i])) {
      throw std::invalid_argument("profile: slope " + std::to_string(i) +
                                  " is not finite");
    }
  }
  values_.resize(breakpoints_.size());
  values_[0] = anchor_;
  total_energy_ = 0.0;
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    const double w = slopes_[i];
    const double dz = breakpoints_[i + 1] - breakpoints_[i];
    values_[i + 1] = values_[i] + w * dz;
    total_energy_ += w * w * dz;
  }
  if (!std::isfinite(total_energy_)) {
    throw std::invalid_argument("profile: total energy overflows");
  }
}

double InitialProfile::eval_u(double x) const {
  if (x <= breakpoints_.front()) return values_.front();
  if (x >= breakpoints_.back()) return values_.back();
  const auto it =
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return values_[i] + slopes_[i] * (x - breakpoints_[i]);
}

std::optional<std::size_t> InitialProfile::cell_index(double zeta) const {
  if (zeta < breakpoints_.front() || zeta >= breakpoints_.back()) {
    return std::nullopt;
  }
  const auto it =
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), zeta);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

std::optional<double> InitialProfile::slope_at(double zeta) const {
  if (zeta < breakpoints_.front() || zeta > breakpoints_.back()) return 0.0;
  if (is_breakpoint(zeta)) return std::nullopt;
  const auto i = cell_index(zeta);
  if (!i) return 0.0;
  return slopes_[*i];
}

bool InitialProfile::is_breakpoint(double zeta) const {
  return std::binary_search(breakpoints_.begin(), breakpoints_.end(), zeta);
}

std::vector<CellMeta> cell_meta(const InitialProfile& p) {
  std::vector<CellMeta> out(p.cell_count());
  for (std::size_t i = 0; i < p.cell_count(); ++i) {
    CellMeta& c = out[i];
    c.index = i;
    c.zeta_lo = p.breakpoints()[i];
    c.zeta_hi = p.breakpoints()[i + 1];
    c.width = c.zeta_hi - c.zeta_lo;
    c.slope = p.slopes()[i];
    c.energy = c.slope * c.slope * c.width;
    c.blowup_time = c.slope < 0.0 ? -2.0 / c.slope : kInf;
  }
  return out;
}

double survivor_mass(const std::vector<CellMeta>& cells, double t) {
  double sum = 0.0;
  for (const CellMeta& c : cells) {
    if (c.blowup_time > t) sum += c.energy;
  }
  return sum;
}

double survivor_mass(const InitialProfile& p, double t) {
  return survivor_mass(cell_meta(p), t);
}

}  // namespace hsx
