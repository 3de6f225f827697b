#include "hsx/dissipative.hpp"

#include <stdexcept>

namespace hsx {

Frame solve_at(const InitialProfile& profile, double t) {
  if (t < 0.0) throw std::invalid_argument("solve_at: t must be >= 0");
  return DissipativeSolution(profile).frame_at(t);
}

LabelState characteristic_state(const InitialProfile& profile, double zeta,
                                double t) {
  if (t < 0.0) throw std::invalid_argument("characteristic_state: t >= 0");
  return DissipativeSolution(profile).label_state(zeta, t);
}

std::vector<EnergySample> energy_series(const InitialProfile& profile,
                                        const std::vector<double>& t_grid) {
  const auto cells = cell_meta(profile);
  std::vector<EnergySample> out;
  out.reserve(t_grid.size());
  double prev = 0.0;
  bool first = true;
  for (double t : t_grid) {
    if (t < 0.0 || (!first && t < prev)) {
      throw std::invalid_argument(
          "energy_series: t_grid must be nondecreasing and nonnegative");
    }
    prev = t;
    first = false;
    const double m = survivor_mass(cells, t);
    out.push_back({t, m, 0.5 * m});
  }
  return out;
}

}  // namespace hsx
