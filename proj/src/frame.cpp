#include "hsx/frame.hpp"

#include <algorithm>

namespace hsx {

namespace {

// Index of the cell whose closed span contains xq, preferring a cell of
// positive width; nodes.size()-2 at the right end.
std::size_t containing_cell(const std::vector<double>& x, double xq) {
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  if (it == x.begin()) return 0;
  std::size_t j = static_cast<std::size_t>(it - x.begin()) - 1;
  if (j >= x.size() - 1) j = x.size() - 2;
  return j;
}

}  // namespace

double Frame::eval_u(double xq) const {
  if (xq <= x.front()) return u.front();
  if (xq >= x.back()) return u.back();
  const std::size_t j = containing_cell(x, xq);
  return u[j] + cells[j].slope * (xq - x[j]);
}

double Frame::forcing(double xq) const {
  if (xq <= x.front()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (xq >= x[j + 1]) {
      sum += cells[j].energy;
      continue;
    }
    const double w = cells[j].slope;
    sum += w * w * (xq - x[j]);
    break;
  }
  return sum;
}

double Frame::energy_total() const {
  double sum = 0.0;
  for (const FrameCell& c : cells) sum += c.energy;
  return sum;
}

double Frame::energy_quadrature() const {
  double sum = 0.0;
  for (const FrameCell& c : cells) sum += c.slope * c.slope * c.width;
  return sum;
}

double Frame::energy_window(double xa, double xb) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double lo = std::max(xa, x[j]);
    const double hi = std::min(xb, x[j + 1]);
    if (hi <= lo) continue;
    if (xa <= x[j] && x[j + 1] <= xb) {
      // Fully covered: the stored energy is exact, while slope^2 times a
      // node difference loses everything for steep slim cells.
      sum += cells[j].energy;
    } else {
      const double w = cells[j].slope;
      sum += w * w * (hi - lo);
    }
  }
  return sum;
}

double Frame::positive_energy_window(double xa, double xb) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double w = cells[j].slope;
    if (w <= 0.0) continue;
    const double lo = std::max(xa, x[j]);
    const double hi = std::min(xb, x[j + 1]);
    if (hi <= lo) continue;
    if (xa <= x[j] && x[j + 1] <= xb) {
      sum += cells[j].energy;
    } else {
      sum += w * w * (hi - lo);
    }
  }
  return sum;
}

}  // namespace hsx
