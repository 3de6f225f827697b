#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsx/solution.hpp"

namespace hsx {

// Which member of the fan a trace follows past a branch point.
enum class SidePolicy { Leftmost, Rightmost, Generic };

struct TraceSample {
  double t = 0.0;
  double x = 0.0;
  double u = 0.0;
  std::optional<double> w;  // slope at the trace point, where defined
};

struct CharacteristicTrace {
  double label = 0.0;
  SidePolicy side = SidePolicy::Generic;
  double lambda = 0.5;
  double dt = 0.0;
  std::vector<TraceSample> samples;  // at k*dt plus the exact endpoint
};

struct TraceOptions {
  SidePolicy side = SidePolicy::Generic;
  // Fan-interior fraction of the opening width for Generic traces.
  double lambda = 0.5;
  // Half-width, in steps, of the exact-path layer glued around a collision
  // the trace rides into. The (x,u) field gradient grows like 1/(T-t)
  // there, which no fixed-step explicit scheme resolves; outside the layer
  // the integrator is plain RK4 against the frames.
  int glue_steps = 32;
};

// Classical one-step RK4 on dx/dt = u, du/dt = F(x,t)/2 with F taken
// exactly from the frames, stepping split at every blow-up time. Stage
// fields use the linear extension of the trace's own cell so spatial
// kinks at the nodes never enter the truncation error.
CharacteristicTrace integrate_characteristic(const Solution& sol, double zeta,
                                             double t_end, double dt,
                                             const TraceOptions& opt = {});

struct PairDiagnostics {
  std::vector<double> t;
  std::vector<double> h;      // x2 - x1
  std::vector<double> p;      // u2 - u1
  std::vector<double> omega;  // p/h, recorded while h > collapse_tol
  double collapse_tol = 1e-12;
};

PairDiagnostics pair_diagnostics(const CharacteristicTrace& first,
                                 const CharacteristicTrace& second);

// min over the recorded grid of omega(t) - 2*omega0/(2 + t*omega0), taken
// while the bound's denominator stays positive.
double riccati_margin(const PairDiagnostics& d);

// max over the recorded grid of |h - h0*exp(trapezoid int omega)| relative
// to max(h0, h).
double exponential_identity_error(const PairDiagnostics& d);

struct SeparationCheckResult {
  bool applicable = false;
  std::string reason;
  double eps0 = 0.0;
  double bound = 0.0;
  double min_separation = 0.0;
  double margin = 0.0;
  bool pass = false;
};

// Lower bound |x_{z1}(s) - x_{z0}(s)| >= |z1-z0| * t^2 * eps0^2 / 16 on
// s in (0,t], for z0 in the surviving set with w0(z0) > -2/t + eps0.
SeparationCheckResult separation_lower_bound_check(
    const Solution& sol, double zeta0, double zeta1, double t,
    std::optional<double> eps0 = std::nullopt);

struct AveragedEnergyProbe {
  bool applicable = false;
  std::string reason;
  std::vector<double> eps;
  std::vector<double> errors;
};

// | int_sigma^tau (window-averaged w^2 - w^2 at the trace point) dt | per
// epsilon; exact zero once the window sits inside a single cell.
AveragedEnergyProbe averaged_energy_probe(const Solution& sol, double zeta,
                                          std::vector<double> eps_sequence,
                                          double sigma, double tau);

}  // namespace hsx
