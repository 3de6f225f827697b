#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hsx/continuation.hpp"
#include "hsx/dissipative.hpp"

namespace hsx {

struct PolicyVerdict {
  std::string id;
  bool never_below_bound = false;   // E_policy >= bound everywhere
  bool strict_after_event = false;  // exceeds at first grid point past its
                                    // first triggered event (vacuously true
                                    // for the dissipative policy)
  double min_margin = 0.0;          // min over the grid of E_policy - bound
  std::optional<double> first_exceedance_t;
};

// Energy series of every policy against the dissipative bound on a shared
// time grid, with the ordering verdicts.
struct EnergyReport {
  std::vector<double> t_grid;
  std::vector<double> bound;  // integral of w0^2 over the surviving labels
  std::vector<std::string> policy_ids;
  std::vector<std::vector<double>> series;  // one row per policy
  std::vector<PolicyVerdict> verdicts;
  bool all_ok = false;
};

// Time grid containing every blow-up time <= t_end, the midpoints of the
// event gaps, and a uniform refinement; step series are determined by
// exactly these samples.
std::vector<double> ledger_time_grid(const InitialProfile& profile,
                                     double t_end, std::size_t uniform);

EnergyReport compare(
    const InitialProfile& profile,
    const std::vector<std::pair<std::string, ContinuationPolicy>>& policies,
    const std::vector<double>& t_grid);

// min over the grid of
//   int_{x_xi(t)}^{x_zeta(t)} w^2  -  int over surviving labels in (xi,zeta)
// of w0^2; zero for the dissipative solution, nonnegative for every policy.
double window_energy_margin(const Solution& sol, double xi, double zeta,
                            const std::vector<double>& t_grid);

// |u(x_xi(t),t) - u0(xi) - (1/2) int_0^t int_{I_s, left of xi} w0^2|,
// the closed-form signature of the dissipative solution. Rejects
// re-injecting solutions.
double dissipative_characterization_residual(const Solution& sol, double xi,
                                             double t);

}  // namespace hsx
