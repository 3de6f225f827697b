#pragma once

#include <vector>

#include "hsx/solution.hpp"

namespace hsx {

// The unique dissipative solution: every cell follows its closed-form
// slope 2*w0/(2+t*w0) and width dz*(2+t*w0)^2/4 until its blow-up time,
// after which it is a zero-width marker and its energy is gone for good.
class DissipativeSolution : public Solution {
 public:
  explicit DissipativeSolution(InitialProfile profile)
      : Solution(std::move(profile), {}) {}
};

struct EnergySample {
  double t = 0.0;
  double w2_integral = 0.0;  // integral of w^2 at time t
  double energy = 0.0;       // E(t) = w2_integral / 2
};

Frame solve_at(const InitialProfile& profile, double t);
LabelState characteristic_state(const InitialProfile& profile, double zeta,
                                double t);
std::vector<EnergySample> energy_series(const InitialProfile& profile,
                                        const std::vector<double>& t_grid);

}  // namespace hsx
