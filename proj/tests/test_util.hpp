#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hsx/profile.hpp"

namespace hsx::testutil {

inline InitialProfile cusp() { return InitialProfile({0.0, 1.0}, {-2.0}, 0.0); }

inline InitialProfile two_cell() {
  return InitialProfile({-1.0, 0.0, 1.0}, {1.0, -1.0}, 0.0);
}

inline InitialProfile flat() { return InitialProfile({0.0, 1.0}, {0.0}, 0.0); }

// Random compactly supported piecewise datum; slopes in [-5, 5].
inline InitialProfile random_profile(std::mt19937& rng,
                                     std::size_t max_cells = 50) {
  std::uniform_int_distribution<std::size_t> ncells(1, max_cells);
  std::uniform_real_distribution<double> width(0.05, 0.5);
  std::uniform_real_distribution<double> slope(-5.0, 5.0);
  std::uniform_real_distribution<double> start(-2.0, 0.0);
  std::uniform_real_distribution<double> anchor(-1.0, 1.0);
  const std::size_t n = ncells(rng);
  std::vector<double> bp{start(rng)};
  std::vector<double> slopes;
  for (std::size_t i = 0; i < n; ++i) {
    bp.push_back(bp.back() + width(rng));
    slopes.push_back(slope(rng));
  }
  return InitialProfile(std::move(bp), std::move(slopes), anchor(rng));
}

}  // namespace hsx::testutil
