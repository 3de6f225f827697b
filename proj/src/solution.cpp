#include "hsx/solution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hsx {

Solution::Solution(InitialProfile profile, std::vector<double> kappas)
    : profile_(std::move(profile)), kappas_(std::move(kappas)) {
  cells_ = cell_meta(profile_);
  if (kappas_.empty()) kappas_.assign(cells_.size(), 0.0);
  if (kappas_.size() != cells_.size()) {
    throw std::invalid_argument("solution: kappa list size mismatch");
  }
  std::map<double, std::vector<std::size_t>> by_time;
  for (const CellMeta& c : cells_) {
    if (std::isfinite(c.blowup_time)) by_time[c.blowup_time].push_back(c.index);
  }
  events_.reserve(by_time.size());
  for (auto& [t, idx] : by_time) events_.push_back({t, std::move(idx)});
}

std::vector<double> Solution::event_times() const {
  std::vector<double> out;
  out.reserve(events_.size());
  for (const BlowupEvent& e : events_) out.push_back(e.time);
  return out;
}

bool Solution::has_resurrection() const {
  for (double k : kappas_) {
    if (k > 0.0) return true;
  }
  return false;
}

Frame Solution::frame_at(double t, Limit lim) const {
  Frame f;
  f.time = t;
  const std::size_t n = cells_.size();
  f.x.resize(n + 1);
  f.u.resize(n + 1);
  f.cells.resize(n);
  f.x[0] = profile_.support_lo() + profile_.anchor() * t;
  f.u[0] = profile_.anchor();
  for (std::size_t i = 0; i < n; ++i) {
    const CellMeta& c = cells_[i];
    const bool alive =
        lim == Limit::Lower ? t <= c.blowup_time : t < c.blowup_time;
    if (alive) {
      const double q = 2.0 + t * c.slope;
      if (q > 0.0) {
        const double width = c.width * (0.25 * q * q);
        const double slope = 2.0 * c.slope / q;
        const double p = 0.5 * c.width * c.slope * q;  // w*h across the cell
        f.cells[i] = {CellKind::Interior, i, width, slope, c.energy};
        f.x[i + 1] = f.x[i] + width;
        f.u[i + 1] = f.u[i] + p;
        continue;
      }
      // t is within rounding of the blow-up instant: width is zero to
      // machine precision; keep the energy so prefix sums stay exact.
      f.cells[i] = {CellKind::Interior, i, 0.0, 0.0, c.energy};
      f.x[i + 1] = f.x[i];
      f.u[i + 1] = f.u[i];
      continue;
    }
    const double kap = kappas_[i];
    const bool fan_active =
        kap > 0.0 &&
        (lim == Limit::Upper ? t >= c.blowup_time : t > c.blowup_time);
    if (fan_active) {
      const double tau = t - c.blowup_time;
      const double re = kap * c.energy;
      const double width = tau > 0.0 ? 0.25 * re * tau * tau : 0.0;
      const double slope = tau > 0.0 ? 2.0 / tau : 0.0;
      const double p = tau > 0.0 ? 0.5 * re * tau : 0.0;
      f.cells[i] = {CellKind::Fan, i, width, slope, re};
      f.x[i + 1] = f.x[i] + width;
      f.u[i + 1] = f.u[i] + p;
    } else {
      f.cells[i] = {CellKind::Collapsed, i, 0.0, 0.0, 0.0};
      f.x[i + 1] = f.x[i];
      f.u[i + 1] = f.u[i];
    }
  }
  return f;
}

double Solution::total_energy_at(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const CellMeta& c = cells_[i];
    if (t < c.blowup_time) {
      sum += c.energy;
    } else if (kappas_[i] > 0.0 && t > c.blowup_time) {
      sum += kappas_[i] * c.energy;
    }
  }
  return sum;
}

std::optional<std::size_t> Solution::label_node(double zeta, double t,
                                                LabelSide side) const {
  const auto& bp = profile_.breakpoints();
  const std::size_t n = cells_.size();
  if (zeta < bp.front() || zeta > bp.back()) return std::nullopt;

  std::size_t node;
  double arrival = 0.0;  // when the label reached its current node
  if (profile_.is_breakpoint(zeta)) {
    node = static_cast<std::size_t>(
        std::lower_bound(bp.begin(), bp.end(), zeta) - bp.begin());
  } else {
    const std::size_t i = *profile_.cell_index(zeta);
    if (t < cells_[i].blowup_time) return std::nullopt;
    arrival = cells_[i].blowup_time;
    node = side == LabelSide::Leftmost ? i + 1 : i;
  }
  // Cross an adjacent cell only while it has zero width with the label at
  // its edge: a permanent marker any time after its collapse, a fan only
  // at its birth instant. A fan opened before the label arrived is an
  // ordinary neighbor and blocks the extremal characteristic.
  while (true) {
    std::size_t c;
    if (side == LabelSide::Rightmost) {
      if (node >= n) break;
      c = node;
    } else {
      if (node == 0) break;
      c = node - 1;
    }
    const double T = cells_[c].blowup_time;
    if (t < T) break;
    if (kappas_[c] > 0.0 && T < arrival) break;
    arrival = std::max(arrival, T);
    if (side == LabelSide::Rightmost) {
      ++node;
    } else {
      --node;
    }
  }
  return node;
}

LabelState Solution::label_state(double zeta, double t, LabelSide side) const {
  const auto& bp = profile_.breakpoints();
  if (zeta < bp.front()) {
    return {zeta + profile_.anchor() * t, profile_.anchor(), 0.0};
  }
  const Frame f = frame_at(t);
  if (zeta > bp.back()) {
    return {zeta - bp.back() + f.x.back(), f.u.back(), 0.0};
  }
  if (!profile_.is_breakpoint(zeta)) {
    const std::size_t i = *profile_.cell_index(zeta);
    const CellMeta& c = cells_[i];
    if (t < c.blowup_time) {
      const double q = 2.0 + t * c.slope;
      const double dz = zeta - c.zeta_lo;
      if (q > 0.0) {
        return {f.x[i] + dz * (0.25 * q * q), f.u[i] + dz * (0.5 * c.slope * q),
                2.0 * c.slope / q};
      }
      return {f.x[i], f.u[i], std::nullopt};
    }
  }
  const std::size_t node = *label_node(zeta, t, side);
  return {f.x[node], f.u[node], std::nullopt};
}

}  // namespace hsx
