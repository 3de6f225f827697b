#include "hsx/energy_report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hsx {

std::vector<double> ledger_time_grid(const InitialProfile& profile,
                                     double t_end, std::size_t uniform) {
  if (t_end < 0.0) throw std::invalid_argument("time grid: t_end < 0");
  std::set<double> pts{0.0, t_end};
  std::vector<double> marks{0.0};
  for (const CellMeta& c : cell_meta(profile)) {
    if (std::isfinite(c.blowup_time) && c.blowup_time <= t_end) {
      pts.insert(c.blowup_time);
      marks.push_back(c.blowup_time);
    }
  }
  marks.push_back(t_end);
  std::sort(marks.begin(), marks.end());
  for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
    pts.insert(0.5 * (marks[k] + marks[k + 1]));
  }
  for (std::size_t k = 1; k + 1 < uniform + 1; ++k) {
    pts.insert(t_end * static_cast<double>(k) / static_cast<double>(uniform));
  }
  return {pts.begin(), pts.end()};
}

EnergyReport compare(
    const InitialProfile& profile,
    const std::vector<std::pair<std::string, ContinuationPolicy>>& policies,
    const std::vector<double>& t_grid) {
  bool has_dissipative = false;
  for (const auto& [id, pol] : policies) {
    if (pol.dissipative()) has_dissipative = true;
  }
  if (!has_dissipative) {
    throw std::invalid_argument("compare: the kappa=0 policy must be present");
  }

  EnergyReport rep;
  rep.t_grid = t_grid;
  const auto cells = cell_meta(profile);
  rep.bound.reserve(t_grid.size());
  for (double t : t_grid) rep.bound.push_back(survivor_mass(cells, t));

  rep.all_ok = true;
  for (const auto& [id, pol] : policies) {
    const ContinuationSolution sol(profile, pol);
    std::vector<double> e;
    e.reserve(t_grid.size());
    for (double t : t_grid) e.push_back(sol.total_energy_at(t));

    PolicyVerdict v;
    v.id = id;
    v.never_below_bound = true;
    v.min_margin = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      const double margin = e[k] - rep.bound[k];
      if (first || margin < v.min_margin) v.min_margin = margin;
      first = false;
      if (margin < -1e-10) v.never_below_bound = false;
      if (margin > 1e-10 && !v.first_exceedance_t) {
        v.first_exceedance_t = t_grid[k];
      }
    }

    // First triggered event of the policy, if any.
    double first_event = kInf;
    for (const auto& [i, k] : pol.kappas()) {
      if (k > 0.0 && std::isfinite(cells[i].blowup_time)) {
        first_event = std::min(first_event, cells[i].blowup_time);
      }
    }
    if (std::isfinite(first_event)) {
      v.strict_after_event = false;
      for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (t_grid[k] > first_event) {
          v.strict_after_event = (e[k] - rep.bound[k]) > 1e-10;
          break;
        }
      }
    } else {
      v.strict_after_event = true;
    }

    rep.all_ok = rep.all_ok && v.never_below_bound && v.strict_after_event;
    rep.policy_ids.push_back(id);
    rep.series.push_back(std::move(e));
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

double window_energy_margin(const Solution& sol, double xi, double zeta,
                            const std::vector<double>& t_grid) {
  if (!(xi <= zeta)) throw std::invalid_argument("window margin: xi > zeta");
  const auto& cells = sol.cells();
  double worst = 0.0;
  bool first = true;
  for (double t : t_grid) {
    // The window integral of w^2, pulled back cell by cell through the
    // affine label-to-position maps: a surviving cell contributes exactly
    // w0^2 times its label overlap (its w^2 h is conserved), and a fan
    // contributes its re-injected energy when it lies inside the window.
    // Evaluating the survivors in label space avoids the cancellation a
    // position-space clip suffers when a cell is about to blow up.
    const double xa = sol.label_state(xi, t).x;
    const double xb = sol.label_state(zeta, t).x;
    const Frame f = sol.frame_at(t);
    double lhs = 0.0;
    double rhs = 0.0;
    for (const CellMeta& c : cells) {
      if (c.blowup_time > t) {
        const double lo = std::max(xi, c.zeta_lo);
        const double hi = std::min(zeta, c.zeta_hi);
        if (hi > lo) {
          const double m = c.slope * c.slope * (hi - lo);
          lhs += m;
          rhs += m;
        }
      } else if (sol.kappa(c.index) > 0.0 && t > c.blowup_time) {
        if (xa <= f.x[c.index] && f.x[c.index + 1] <= xb) {
          lhs += sol.kappa(c.index) * c.energy;
        }
      }
    }
    const double margin = lhs - rhs;
    if (first || margin < worst) worst = margin;
    first = false;
  }
  return worst;
}

double dissipative_characterization_residual(const Solution& sol, double xi,
                                             double t) {
  if (sol.has_resurrection()) {
    throw std::invalid_argument(
        "dissipative characterization: solution re-injects energy");
  }
  const double lhs = sol.label_state(xi, t).u;
  double rhs = sol.profile().eval_u(xi);
  for (const CellMeta& c : sol.cells()) {
    const double len = std::min(xi, c.zeta_hi) - c.zeta_lo;
    if (len <= 0.0) continue;
    rhs += 0.5 * c.slope * c.slope * len * std::min(t, c.blowup_time);
  }
  return std::fabs(lhs - rhs);
}

}  // namespace hsx
