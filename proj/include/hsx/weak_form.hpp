#pragma once

#include <cstddef>
#include <vector>

#include "hsx/frame.hpp"

namespace hsx {

// Compactly supported C^3 test function
//   phi(x,t) = bump((x-cx)/rx) * bump((t-ct)/rt),
// bump(s) = (1-s^2)^4 on |s|<1, zero outside.
struct SmoothBump {
  double cx = 0.0, rx = 1.0;
  double ct = 0.0, rt = 1.0;

  double phi(double x, double t) const;
  double phi_x(double x, double t) const;
  double phi_t(double x, double t) const;
  double peak() const;             // max of phi
  double support_measure() const;  // 4*rx*rt
};

struct SpaceTimeWindow {
  double x_lo = 0.0, x_hi = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
};

struct WeakResidualOptions {
  std::size_t bumps_x = 3;
  std::size_t bumps_t = 3;
  int max_refine = 3;
  double converge_tol = 1e-9;
};

struct WeakResidualResult {
  double residual = 0.0;   // max over bumps, normalized
  bool converged = false;  // refinement deltas settled for every bump
  double worst_delta = 0.0;
};

// Max over a bump grid of |int [u phi_t + u^2/2 phi_x + F/2 phi] dx dt|
// normalized by peak(phi) * support measure. The x-integral is split at
// the frame nodes and the t-integral at the blow-up times, then both are
// refined until the value is stable.
WeakResidualResult weak_residual(const FrameSource& src,
                                 const SpaceTimeWindow& window,
                                 const WeakResidualOptions& opt = {});

// Fault-injection wrapper: one original cell's slope scaled by a factor,
// node values rebuilt for continuity. Not a solution; used to confirm the
// residual check has teeth.
class ScaledSlopeSource : public FrameSource {
 public:
  ScaledSlopeSource(const FrameSource& base, std::size_t cell, double factor)
      : base_(base), cell_(cell), factor_(factor) {}

  Frame frame_at(double t, Limit lim = Limit::Value) const override;
  std::vector<double> event_times() const override;

 private:
  const FrameSource& base_;
  std::size_t cell_ = 0;
  double factor_ = 1.0;
};

}  // namespace hsx
