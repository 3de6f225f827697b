#include "hsx/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsx {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// What the trace currently is, structurally. Interior labels stay inside
// their cell until it collapses; afterwards a trace rides a node or, past
// a branch point, a fixed fraction of a fan.
struct Identity {
  enum Kind { ExteriorLeft, ExteriorRight, Interior, Node, FanInterior };
  Kind kind = Interior;
  std::size_t cell = kNone;  // Interior / FanInterior
  std::size_t node = kNone;  // Node
  double frac = 0.0;         // FanInterior
};

// Stage field: the forcing F extended linearly from one node with one
// cell's slope, so the x-kinks at the nodes never enter the stages.
struct Home {
  std::size_t anchor = 0;
  std::size_t slope_cell = kNone;  // kNone: zero-slope extension
};

struct StageField {
  double ax = 0.0;  // anchor position
  double aF = 0.0;  // forcing at the anchor
  double w = 0.0;   // extension slope
};

StageField stage_field(const Solution& sol, const Home& home, double t,
                       Limit lim) {
  const Frame f = sol.frame_at(t, lim);
  StageField s;
  s.ax = f.x[home.anchor];
  for (std::size_t i = 0; i < home.anchor; ++i) s.aF += f.cells[i].energy;
  s.w = home.slope_cell == kNone ? 0.0 : f.cells[home.slope_cell].slope;
  return s;
}

void rk4_substep(const Solution& sol, const Home& home, double a, double b,
                 bool b_is_event, double& x, double& u) {
  const double h = b - a;
  if (h <= 0.0) return;
  // One-sided limits at the leg ends keep the forcing smooth within the
  // leg even when it starts or ends exactly on a blow-up instant.
  const StageField fa = stage_field(sol, home, a, Limit::Upper);
  const StageField fm = stage_field(sol, home, 0.5 * (a + b), Limit::Value);
  const StageField fb =
      stage_field(sol, home, b, b_is_event ? Limit::Lower : Limit::Value);
  const auto force = [](const StageField& s, double xx) {
    return 0.5 * (s.aF + s.w * s.w * (xx - s.ax));
  };
  const double k1x = u;
  const double k1u = force(fa, x);
  const double k2x = u + 0.5 * h * k1u;
  const double k2u = force(fm, x + 0.5 * h * k1x);
  const double k3x = u + 0.5 * h * k2u;
  const double k3u = force(fm, x + 0.5 * h * k2x);
  const double k4x = u + h * k3u;
  const double k4u = force(fb, x + h * k3x);
  x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
}

class Tracer {
 public:
  Tracer(const Solution& sol, double zeta, const TraceOptions& opt)
      : sol_(sol), zeta_(zeta), opt_(opt) {
    const auto& prof = sol.profile();
    const auto& bp = prof.breakpoints();
    if (zeta < bp.front()) {
      id_.kind = Identity::ExteriorLeft;
    } else if (zeta > bp.back()) {
      id_.kind = Identity::ExteriorRight;
    } else if (prof.is_breakpoint(zeta)) {
      id_.kind = Identity::Node;
      id_.node = static_cast<std::size_t>(
          std::lower_bound(bp.begin(), bp.end(), zeta) - bp.begin());
    } else {
      id_.kind = Identity::Interior;
      id_.cell = *prof.cell_index(zeta);
    }
    select_home(0.0);
    const LabelState s0 = exact_state(0.0);
    x_ = s0.x;
    u_ = s0.u;
  }

  // Exact state of the trace's current structural path at time t.
  LabelState exact_state(double t) const {
    switch (id_.kind) {
      case Identity::ExteriorLeft:
      case Identity::ExteriorRight:
        return sol_.label_state(zeta_, t);
      case Identity::Interior:
        return sol_.label_state(zeta_, t);
      case Identity::Node: {
        const Frame f = sol_.frame_at(t);
        return {f.x[id_.node], f.u[id_.node], std::nullopt};
      }
      case Identity::FanInterior: {
        const Frame f = sol_.frame_at(t);
        const FrameCell& c = f.cells[id_.cell];
        const double dx = id_.frac * c.width;
        std::optional<double> w;
        if (c.width > 0.0) w = c.slope;
        return {f.x[id_.cell] + dx, f.u[id_.cell] + c.slope * dx, w};
      }
    }
    return {};
  }

  std::optional<double> sample_w(double t) const {
    switch (id_.kind) {
      case Identity::ExteriorLeft:
      case Identity::ExteriorRight:
        return 0.0;
      case Identity::Interior: {
        const CellMeta& c = sol_.cells()[id_.cell];
        const double q = 2.0 + t * c.slope;
        if (t < c.blowup_time && q > 0.0) return 2.0 * c.slope / q;
        return std::nullopt;
      }
      case Identity::Node:
        return std::nullopt;
      case Identity::FanInterior: {
        const double tau = t - sol_.cells()[id_.cell].blowup_time;
        if (tau > 0.0) return 2.0 / tau;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  CharacteristicTrace run(double t_end, double dt) {
    CharacteristicTrace tr;
    tr.label = zeta_;
    tr.side = opt_.side;
    tr.lambda = opt_.lambda;
    tr.dt = dt;
    tr.samples.push_back({0.0, x_, u_, sample_w(0.0)});

    const double glue = static_cast<double>(std::max(1, opt_.glue_steps)) * dt;
    double t = 0.0;
    std::size_t k = 0;
    while (t < t_end) {
      ++k;
      const double t_next = std::min(t_end, static_cast<double>(k) * dt);
      advance(t, t_next, glue);
      t = t_next;
      tr.samples.push_back({t, x_, u_, sample_w(t)});
    }
    return tr;
  }

 private:
  // Integrate from a to b (within one sample step), splitting at events
  // and exact-layer boundaries.
  void advance(double a, double b, double glue) {
    double t = a;
    while (t < b) {
      refresh_critical(t);
      double stop = b;
      const double ev = next_event_after(t);
      if (ev <= stop) stop = ev;
      bool exact_leg = false;
      if (critical_ < kInfEvent) {
        const double g0 = critical_ - (stiff_approach_ ? glue : 0.0);
        if (t >= g0 && t < critical_) {
          exact_leg = true;  // inside the approach layer
          stop = std::min(stop, critical_);
        } else if (t < g0 && g0 < stop) {
          stop = g0;
        }
      }
      if (post_glue_until_ > t) {
        exact_leg = true;
        stop = std::min(stop, post_glue_until_);
      }
      if (exact_leg) {
        const LabelState s = exact_state(stop);
        x_ = s.x;
        u_ = s.u;
      } else {
        const bool hits_event = stop == ev;
        rk4_substep(sol_, home_, t, stop, hits_event, x_, u_);
      }
      t = stop;
      if (t == ev) handle_event(ev);
    }
  }

  static constexpr double kInfEvent = std::numeric_limits<double>::infinity();

  double next_event_after(double t) const {
    for (const BlowupEvent& e : sol_.events()) {
      if (e.time > t) return e.time;
    }
    return kInfEvent;
  }

  // First upcoming event the trace is involved in, and whether the
  // approach to it is stiff for the current identity/home.
  void refresh_critical(double t) {
    if (critical_valid_ && critical_ > t) return;
    critical_ = kInfEvent;
    stiff_approach_ = false;
    critical_valid_ = true;
    if (id_.kind == Identity::ExteriorLeft ||
        id_.kind == Identity::ExteriorRight ||
        id_.kind == Identity::FanInterior) {
      return;
    }
    for (const BlowupEvent& e : sol_.events()) {
      if (!(e.time > t)) continue;
      if (involved(e)) {
        critical_ = e.time;
        if (id_.kind == Identity::Interior) {
          stiff_approach_ = true;  // the trace's own cell blows up
        } else {
          stiff_approach_ =
              home_.slope_cell != kNone &&
              std::find(e.cells.begin(), e.cells.end(), home_.slope_cell) !=
                  e.cells.end();
        }
        return;
      }
    }
  }

  bool involved(const BlowupEvent& e) const {
    if (id_.kind == Identity::Interior) {
      return sol_.cells()[id_.cell].blowup_time == e.time;
    }
    if (id_.kind != Identity::Node) return false;
    const auto [lo, hi] = merged_cluster(e.time, id_.node);
    for (std::size_t c : e.cells) {
      if (c >= lo && c < hi) return true;
    }
    return false;
  }

  // Node range [lo, hi] merged with `node` at time t (cells lo..hi-1 all
  // have zero width in the at-t frame).
  std::pair<std::size_t, std::size_t> merged_cluster(double t,
                                                     std::size_t node) const {
    const Frame f = sol_.frame_at(t);
    std::size_t lo = node;
    while (lo > 0 && f.cells[lo - 1].width == 0.0) --lo;
    std::size_t hi = node;
    while (hi < f.cell_count() && f.cells[hi].width == 0.0) ++hi;
    return {lo, hi};
  }

  void handle_event(double t_event) {
    const BlowupEvent* ev = nullptr;
    for (const BlowupEvent& e : sol_.events()) {
      if (e.time == t_event) ev = &e;
    }
    if (ev && involved(*ev)) {
      transition(*ev);
    }
    if (id_.kind == Identity::Node) select_home(t_event);
    critical_valid_ = false;
  }

  void transition(const BlowupEvent& e) {
    const std::size_t start =
        id_.kind == Identity::Interior ? id_.cell : id_.node;
    const auto [lo, hi] = merged_cluster(e.time, start);

    double opening = 0.0;  // total re-injected energy across the cluster
    for (std::size_t c = lo; c < hi; ++c) {
      if (sol_.kappa(c) > 0.0 && sol_.cells()[c].blowup_time == e.time) {
        opening += sol_.kappa(c) * sol_.cells()[c].energy;
      }
    }

    if (opt_.side == SidePolicy::Leftmost || opening == 0.0) {
      id_ = Identity{Identity::Node, kNone, lo, 0.0};
    } else if (opt_.side == SidePolicy::Rightmost) {
      id_ = Identity{Identity::Node, kNone, hi, 0.0};
    } else {
      // Fraction lambda of the opening width; the fans of the cluster all
      // grow like (t-T)^2, so the containing fan and the inner fraction
      // are fixed.
      const double target = opt_.lambda * opening;
      double cum = 0.0;
      std::size_t fan = kNone;
      double frac = 0.0;
      for (std::size_t c = lo; c < hi; ++c) {
        if (!(sol_.kappa(c) > 0.0) ||
            sol_.cells()[c].blowup_time != e.time) {
          continue;
        }
        const double re = sol_.kappa(c) * sol_.cells()[c].energy;
        fan = c;
        frac = 1.0;
        if (target < cum + re) {
          frac = (target - cum) / re;
          break;
        }
        cum += re;
      }
      id_ = Identity{Identity::FanInterior, fan, kNone, frac};
      post_glue_until_ = e.time +
                         static_cast<double>(std::max(1, opt_.glue_steps)) *
                             dt_hint_;
    }
    const LabelState s = exact_state(e.time);
    x_ = s.x;
    u_ = s.u;
    select_home(e.time);
  }

  void select_home(double t) {
    switch (id_.kind) {
      case Identity::ExteriorLeft:
        home_ = {0, kNone};
        return;
      case Identity::ExteriorRight:
        home_ = {sol_.cells().size(), kNone};
        return;
      case Identity::Interior:
        home_ = {id_.cell, id_.cell};
        return;
      case Identity::FanInterior:
        home_ = {id_.cell, id_.cell};
        return;
      case Identity::Node:
        break;
    }
    // Pick the adjacent side whose field stays smooth the longest:
    // exterior forever, an alive cell until its blow-up, a fan for its
    // age (its slope is bounded by 2/age from now on). Permanently
    // collapsed cells are transparent.
    const std::size_t n = sol_.cells().size();
    const auto side_candidate =
        [&](std::size_t node, int dir) -> std::pair<double, std::size_t> {
      std::size_t c = node;
      while (true) {
        if (dir < 0) {
          if (c == 0) return {kInf, kNone};  // exterior
          --c;
        } else {
          if (c >= n) return {kInf, kNone};
        }
        const CellMeta& m = sol_.cells()[c];
        if (t < m.blowup_time) return {m.blowup_time - t, c};
        if (sol_.kappa(c) > 0.0) return {t - m.blowup_time, c};
        if (dir > 0) ++c;  // collapsed marker: look further
      }
    };
    const auto left = side_candidate(id_.node, -1);
    const auto right = side_candidate(id_.node, +1);
    // Prefer the longer horizon; on a tie prefer the exterior, then the
    // right side.
    bool pick_right = right.first > left.first;
    if (right.first == left.first) {
      pick_right = right.second == kNone || left.second != kNone;
    }
    const auto& sel = pick_right ? right : left;
    home_ = {id_.node, sel.second};
  }

 public:
  void set_dt_hint(double dt) { dt_hint_ = dt; }

 private:
  const Solution& sol_;
  double zeta_ = 0.0;
  TraceOptions opt_;
  Identity id_;
  Home home_;
  double x_ = 0.0;
  double u_ = 0.0;
  double critical_ = kInfEvent;
  bool critical_valid_ = false;
  bool stiff_approach_ = false;
  double post_glue_until_ = 0.0;
  double dt_hint_ = 0.0;
};

}  // namespace

CharacteristicTrace integrate_characteristic(const Solution& sol, double zeta,
                                             double t_end, double dt,
                                             const TraceOptions& opt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integrate_characteristic: dt must be > 0");
  }
  if (t_end < 0.0) {
    throw std::invalid_argument("integrate_characteristic: t_end must be >= 0");
  }
  Tracer tracer(sol, zeta, opt);
  tracer.set_dt_hint(dt);
  return tracer.run(t_end, dt);
}

PairDiagnostics pair_diagnostics(const CharacteristicTrace& first,
                                 const CharacteristicTrace& second) {
  if (first.samples.size() != second.samples.size()) {
    throw std::invalid_argument("pair_diagnostics: mismatched grids");
  }
  PairDiagnostics d;
  const std::size_t n = first.samples.size();
  d.t.reserve(n);
  d.h.reserve(n);
  d.p.reserve(n);
  bool recording = true;
  for (std::size_t k = 0; k < n; ++k) {
    const TraceSample& a = first.samples[k];
    const TraceSample& b = second.samples[k];
    if (a.t != b.t) {
      throw std::invalid_argument("pair_diagnostics: mismatched grids");
    }
    if (k == 0 && !(b.x > a.x)) {
      throw std::invalid_argument(
          "pair_diagnostics: traces must start ordered, x1(0) < x2(0)");
    }
    d.t.push_back(a.t);
    d.h.push_back(b.x - a.x);
    d.p.push_back(b.u - a.u);
    if (recording && d.h.back() > d.collapse_tol) {
      d.omega.push_back(d.p.back() / d.h.back());
    } else {
      recording = false;
    }
  }
  return d;
}

double riccati_margin(const PairDiagnostics& d) {
  if (d.omega.empty()) return 0.0;
  const double w0 = d.omega.front();
  double margin = kInf;
  for (std::size_t k = 0; k < d.omega.size(); ++k) {
    const double denom = 2.0 + d.t[k] * w0;
    if (!(denom > 0.0)) break;
    const double bound = 2.0 * w0 / denom;
    margin = std::min(margin, d.omega[k] - bound);
  }
  return std::isfinite(margin) ? margin : 0.0;
}

double exponential_identity_error(const PairDiagnostics& d) {
  if (d.omega.empty()) return 0.0;
  const double h0 = d.h.front();
  double integral = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < d.omega.size(); ++k) {
    integral +=
        0.5 * (d.omega[k - 1] + d.omega[k]) * (d.t[k] - d.t[k - 1]);
    const double predicted = h0 * std::exp(integral);
    const double err =
        std::fabs(d.h[k] - predicted) / std::max(h0, d.h[k]);
    worst = std::max(worst, err);
  }
  return worst;
}

SeparationCheckResult separation_lower_bound_check(
    const Solution& sol, double zeta0, double zeta1, double t,
    std::optional<double> eps0_opt) {
  SeparationCheckResult r;
  if (!(t > 0.0)) {
    r.reason = "t must be positive";
    return r;
  }
  const auto w0 = sol.profile().slope_at(zeta0);
  if (!w0) {
    r.reason = "w0 undefined at zeta0 (breakpoint)";
    return r;
  }
  if (!(*w0 > -2.0 / t)) {
    r.reason = "zeta0 not in the surviving set at time t";
    return r;
  }
  const double eps0 = eps0_opt.value_or(*w0 + 2.0 / t);
  if (!(eps0 > 0.0) || !(*w0 >= -2.0 / t + eps0 - 1e-15)) {
    r.reason = "eps0 incompatible with w0(zeta0)";
    return r;
  }
  r.eps0 = eps0;
  if (zeta0 == zeta1) {
    r.applicable = true;
    r.pass = true;
    return r;  // degenerate: bound and separation both zero
  }
  const double du = sol.profile().eval_u(zeta1) - sol.profile().eval_u(zeta0);
  const double omega0 = du / (zeta1 - zeta0);
  if (!(omega0 > -2.0 / t + 0.5 * eps0)) {
    r.reason = "initial difference quotient below -2/t + eps0/2";
    return r;
  }
  r.applicable = true;
  r.bound = std::fabs(zeta1 - zeta0) * t * t * eps0 * eps0 / 16.0;
  const int m = 200;
  r.min_separation = kInf;
  for (int j = 1; j <= m; ++j) {
    const double s = t * static_cast<double>(j) / static_cast<double>(m);
    const double xa = sol.label_state(zeta0, s).x;
    const double xb = sol.label_state(zeta1, s).x;
    r.min_separation = std::min(r.min_separation, std::fabs(xb - xa));
  }
  r.margin = r.min_separation - r.bound;
  r.pass = r.margin >= -1e-10;
  return r;
}

AveragedEnergyProbe averaged_energy_probe(const Solution& sol, double zeta,
                                          std::vector<double> eps_sequence,
                                          double sigma, double tau) {
  AveragedEnergyProbe p;
  if (eps_sequence.empty() || !(sigma >= 0.0) || !(tau >= sigma)) {
    p.reason = "need eps values and 0 <= sigma <= tau";
    return p;
  }
  double eps_max = 0.0;
  for (double e : eps_sequence) {
    if (!(e > 0.0)) {
      p.reason = "eps values must be positive";
      return p;
    }
    eps_max = std::max(eps_max, e);
  }
  for (const CellMeta& c : sol.cells()) {
    if (c.zeta_hi > zeta && c.zeta_lo < zeta + eps_max &&
        c.blowup_time <= tau) {
      p.reason = "window crosses a blow-up event";
      return p;
    }
  }
  p.applicable = true;

  // Slope reference on the right of the trace point.
  const auto right_cell = [&]() -> std::optional<std::size_t> {
    const auto& bp = sol.profile().breakpoints();
    if (zeta < bp.front() || zeta >= bp.back()) return std::nullopt;
    const auto it = std::upper_bound(bp.begin(), bp.end(), zeta);
    std::size_t i = static_cast<std::size_t>(it - bp.begin());
    if (i > 0 && bp[i - 1] == zeta) return i - 1;
    return i - 1;
  }();

  // 5-point Gauss-Legendre nodes on [-1,1].
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};

  // Average of w^2 over [xa, xr]; collapses to the exact slope square when
  // the window sees a single slope (the exterior counts as slope zero).
  const auto average_w2 = [](const Frame& f, double xa, double xr) {
    bool single = true, have = false;
    double s0 = 0.0;
    const auto consider = [&](double s, double len) {
      if (!(len > 0.0)) return;
      if (!have) {
        s0 = s;
        have = true;
      } else if (s != s0) {
        single = false;
      }
    };
    consider(0.0, std::min(xr, f.x.front()) - xa);
    for (std::size_t j = 0; j < f.cells.size(); ++j) {
      consider(f.cells[j].slope,
               std::min(xr, f.x[j + 1]) - std::max(xa, f.x[j]));
    }
    consider(0.0, xr - std::max(xa, f.x.back()));
    if (single && have) return s0 * s0;
    return f.energy_window(xa, xr) / (xr - xa);
  };

  for (double eps : eps_sequence) {
    const auto integrand = [&](double t) {
      const double xa = sol.label_state(zeta, t).x;
      const double xr = sol.label_state(zeta + eps, t, LabelSide::Leftmost).x;
      const double width = xr - xa;
      if (!(width > 0.0)) return 0.0;
      const double avg = average_w2(sol.frame_at(t), xa, xr);
      double wref = 0.0;
      if (right_cell) {
        const CellMeta& c = sol.cells()[*right_cell];
        const double q = 2.0 + t * c.slope;
        wref = 2.0 * c.slope / q;
      }
      return avg - wref * wref;
    };
    double integral = 0.0;
    if (tau > sigma) {
      const int panels = 64;
      const double hp = (tau - sigma) / panels;
      for (int j = 0; j < panels; ++j) {
        const double mid = sigma + (j + 0.5) * hp;
        for (int g = 0; g < 5; ++g) {
          integral += 0.5 * hp * gw[g] * integrand(mid + 0.5 * hp * gx[g]);
        }
      }
    }
    p.eps.push_back(eps);
    p.errors.push_back(std::fabs(integral));
  }
  return p;
}

}  // namespace hsx
