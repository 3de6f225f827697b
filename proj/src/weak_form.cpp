#include "hsx/weak_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hsx {

namespace {

// (1-s^2)^4 on |s|<1: C^3 across the support edge, and polynomial inside,
// so the node-split space integrals below are exact for the Gauss rule.
double bump(double s) {
  const double d = 1.0 - s * s;
  if (d <= 0.0) return 0.0;
  return d * d * d * d;
}

double bump_deriv(double s) {
  const double d = 1.0 - s * s;
  if (d <= 0.0) return 0.0;
  return -8.0 * s * d * d * d;
}

// 10-point Gauss-Legendre rule on [-1,1].
constexpr int kG = 10;
const double kGx[kG] = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
    -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
    0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
    0.9739065285171717};
const double kGw[kG] = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
    0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
    0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
    0.0666713443086881};

}  // namespace

double SmoothBump::phi(double x, double t) const {
  return bump((x - cx) / rx) * bump((t - ct) / rt);
}

double SmoothBump::phi_x(double x, double t) const {
  return bump_deriv((x - cx) / rx) / rx * bump((t - ct) / rt);
}

double SmoothBump::phi_t(double x, double t) const {
  return bump((x - cx) / rx) * bump_deriv((t - ct) / rt) / rt;
}

double SmoothBump::peak() const {
  const double b0 = bump(0.0);
  return b0 * b0;
}

double SmoothBump::support_measure() const { return 4.0 * rx * rt; }

namespace {

// Integral over x of the weak-form integrand at one time, the x-axis
// split at the frame nodes so every Gauss panel sees smooth data.
double space_integral(const Frame& f, const SmoothBump& b, double x_lo,
                      double x_hi, int subdiv) {
  std::vector<double> cuts{x_lo, x_hi};
  for (double xn : f.x) {
    if (xn > x_lo && xn < x_hi) cuts.push_back(xn);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    const double hp = (hi - lo) / subdiv;
    for (int s = 0; s < subdiv; ++s) {
      const double mid = lo + (s + 0.5) * hp;
      for (int g = 0; g < kG; ++g) {
        const double x = mid + 0.5 * hp * kGx[g];
        const double u = f.eval_u(x);
        const double F = f.forcing(x);
        const double val = u * b.phi_t(x, f.time) +
                           0.5 * u * u * b.phi_x(x, f.time) +
                           0.5 * F * b.phi(x, f.time);
        total += 0.5 * hp * kGw[g] * val;
      }
    }
  }
  return total;
}

double bump_integral(const FrameSource& src, const SmoothBump& b,
                     const std::vector<double>& events, int level) {
  const double t_lo = b.ct - b.rt;
  const double t_hi = b.ct + b.rt;
  const double x_lo = b.cx - b.rx;
  const double x_hi = b.cx + b.rx;
  std::vector<double> tcuts{t_lo, t_hi};
  for (double e : events) {
    if (e > t_lo && e < t_hi) tcuts.push_back(e);
  }
  std::sort(tcuts.begin(), tcuts.end());

  const int t_panels = 8 << level;
  const int x_subdiv = 1 << level;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < tcuts.size(); ++k) {
    const double lo = tcuts[k];
    const double hi = tcuts[k + 1];
    if (!(hi > lo)) continue;
    const double hp = (hi - lo) / t_panels;
    for (int s = 0; s < t_panels; ++s) {
      const double mid = lo + (s + 0.5) * hp;
      for (int g = 0; g < kG; ++g) {
        const double t = mid + 0.5 * hp * kGx[g];
        const Frame f = src.frame_at(t);
        total +=
            0.5 * hp * kGw[g] * space_integral(f, b, x_lo, x_hi, x_subdiv);
      }
    }
  }
  return total;
}

}  // namespace

WeakResidualResult weak_residual(const FrameSource& src,
                                 const SpaceTimeWindow& window,
                                 const WeakResidualOptions& opt) {
  if (!(window.x_hi > window.x_lo) || !(window.t_hi > window.t_lo)) {
    throw std::invalid_argument("weak_residual: empty window");
  }
  if (opt.bumps_x == 0 || opt.bumps_t == 0) {
    throw std::invalid_argument("weak_residual: empty bump grid");
  }
  const std::vector<double> events = src.event_times();

  WeakResidualResult res;
  res.converged = true;
  const double rx =
      0.5 * (window.x_hi - window.x_lo) / static_cast<double>(opt.bumps_x);
  const double rt =
      0.5 * (window.t_hi - window.t_lo) / static_cast<double>(opt.bumps_t);
  for (std::size_t ix = 0; ix < opt.bumps_x; ++ix) {
    for (std::size_t it = 0; it < opt.bumps_t; ++it) {
      SmoothBump b;
      b.rx = rx;
      b.rt = rt;
      b.cx = window.x_lo + (2.0 * ix + 1.0) * rx;
      b.ct = window.t_lo + (2.0 * it + 1.0) * rt;

      double value = bump_integral(src, b, events, 0);
      double delta = std::numeric_limits<double>::infinity();
      for (int level = 1; level <= opt.max_refine; ++level) {
        const double next = bump_integral(src, b, events, level);
        delta = std::fabs(next - value);
        value = next;
        if (delta <= opt.converge_tol * std::max(1.0, std::fabs(value))) {
          break;
        }
      }
      if (!(delta <= opt.converge_tol * std::max(1.0, std::fabs(value)))) {
        res.converged = false;
      }
      res.worst_delta = std::max(res.worst_delta, delta);
      const double normalized =
          std::fabs(value) / (b.peak() * b.support_measure());
      res.residual = std::max(res.residual, normalized);
    }
  }
  return res;
}

Frame ScaledSlopeSource::frame_at(double t, Limit lim) const {
  Frame f = base_.frame_at(t, lim);
  bool touched = false;
  for (FrameCell& c : f.cells) {
    if (c.kind == CellKind::Interior && c.source == cell_ && c.width > 0.0) {
      c.slope *= factor_;
      c.energy = c.slope * c.slope * c.width;
      touched = true;
    }
  }
  if (touched) {
    for (std::size_t j = 0; j < f.cells.size(); ++j) {
      f.u[j + 1] = f.u[j] + f.cells[j].slope * f.cells[j].width;
    }
  }
  return f;
}

std::vector<double> ScaledSlopeSource::event_times() const {
  return base_.event_times();
}

}  // namespace hsx
