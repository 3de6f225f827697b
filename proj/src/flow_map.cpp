#include "hsx/flow_map.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hsx {

MonotoneFlowMap::MonotoneFlowMap(double time, std::vector<MapSegment> segments)
    : time_(time), segs_(std::move(segments)) {
  if (segs_.empty()) throw std::invalid_argument("flow map: no segments");
}

double MonotoneFlowMap::value(double zeta) const {
  if (zeta < domain_lo() || zeta > domain_hi()) {
    throw std::invalid_argument("flow map: label outside domain");
  }
  // Last segment whose label interval starts at or before zeta; flats
  // following a jump share their left label with it and win the tie,
  // which is exactly the rightmost convention.
  std::size_t idx = 0;
  for (std::size_t k = 0; k < segs_.size(); ++k) {
    if (segs_[k].zeta_lo <= zeta) idx = k;
    else break;
  }
  const MapSegment& s = segs_[idx];
  switch (s.kind) {
    case SegmentKind::Affine: {
      if (zeta >= s.zeta_hi) return s.x_hi;
      return std::min(s.x_hi, s.x_lo + s.slope * (zeta - s.zeta_lo));
    }
    case SegmentKind::Flat:
      return s.x_hi;
    case SegmentKind::Jump:
      return s.x_hi;
  }
  return s.x_hi;
}

GeneralizedInverse::GeneralizedInverse(const std::vector<MapSegment>& segments)
    : segs_(segments) {
  if (segs_.empty()) throw std::invalid_argument("inverse: no segments");
  y_lo_ = segs_.front().x_lo;
  y_hi_ = segs_.back().x_hi;
}

double GeneralizedInverse::value(double y) const {
  if (y < y_lo_ || y > y_hi_) {
    throw std::invalid_argument("inverse: point outside image span");
  }
  for (const MapSegment& s : segs_) {
    if (y > s.x_hi) continue;
    switch (s.kind) {
      case SegmentKind::Affine: {
        if (s.slope <= 0.0 || y <= s.x_lo) return s.zeta_lo;
        return std::min(s.zeta_hi, s.zeta_lo + (y - s.x_lo) / s.slope);
      }
      case SegmentKind::Flat:
      case SegmentKind::Jump:
        return s.zeta_lo;
    }
  }
  return segs_.back().zeta_hi;
}

MonotoneFlowMap build_flow_map(const Solution& sol, double t) {
  if (t < 0.0) throw std::invalid_argument("build_flow_map: t must be >= 0");
  const Frame f = sol.frame_at(t);
  const auto& cells = sol.cells();
  const auto& bp = sol.profile().breakpoints();
  const std::size_t n = cells.size();

  std::vector<MapSegment> segs;
  double cur_x = f.x[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (t < cells[i].blowup_time) {
      const double q = 2.0 + t * cells[i].slope;
      const double slope = 0.25 * q * q;
      if (slope > 0.0) {
        segs.push_back({SegmentKind::Affine, bp[i], bp[i + 1], f.x[i],
                        f.x[i + 1], slope, i});
      } else {
        segs.push_back(
            {SegmentKind::Flat, bp[i], bp[i + 1], f.x[i], f.x[i], 0.0, i});
      }
      cur_x = f.x[i + 1];
      continue;
    }
    // Dead cell: its labels ride the rightmost characteristic out of the
    // collision, which crosses every opening reachable at zero width.
    const double mid = 0.5 * (bp[i] + bp[i + 1]);
    const std::size_t target_node =
        *sol.label_node(mid, t, LabelSide::Rightmost);
    const double target = f.x[target_node];
    if (target > cur_x) {
      segs.push_back(
          {SegmentKind::Jump, bp[i], bp[i], cur_x, target, 0.0, i});
    }
    if (!segs.empty() && segs.back().kind == SegmentKind::Flat &&
        segs.back().x_lo == target) {
      segs.back().zeta_hi = bp[i + 1];
    } else {
      segs.push_back(
          {SegmentKind::Flat, bp[i], bp[i + 1], target, target, 0.0, i});
    }
    cur_x = target;
  }
  return MonotoneFlowMap(t, std::move(segs));
}

PiecewiseConstant::PiecewiseConstant(std::vector<double> bp,
                                     std::vector<double> vals)
    : breakpoints(std::move(bp)), values(std::move(vals)) {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size()) {
    throw std::invalid_argument("piecewise-constant: size mismatch");
  }
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k - 1] < breakpoints[k])) {
      throw std::invalid_argument(
          "piecewise-constant: breakpoints not increasing");
    }
  }
}

PiecewiseConstant PiecewiseConstant::indicator(double lo, double hi) {
  return PiecewiseConstant({lo, hi}, {1.0});
}

double PiecewiseConstant::value(double x) const {
  if (x < breakpoints.front() || x >= breakpoints.back()) return 0.0;
  const auto it =
      std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

namespace {

// f integrated against dzeta over [lo, hi], split at f's breakpoints.
double integrate_pc(const PiecewiseConstant& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  std::vector<double> cuts{lo};
  for (double b : f.breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len > 0.0) sum += f.value(0.5 * (cuts[k] + cuts[k + 1])) * len;
  }
  return sum;
}

}  // namespace

ChangeOfVariablesResult stieltjes_change_of_variables_check(
    const PiecewiseConstant& f, const MonotoneFlowMap& map, double a,
    double b) {
  if (!(a <= b)) throw std::invalid_argument("change of variables: a > b");
  if (a < map.domain_lo() || b > map.domain_hi()) {
    throw std::invalid_argument("change of variables: [a,b] outside domain");
  }

  double lhs = 0.0;
  for (const MapSegment& s : map.segments()) {
    switch (s.kind) {
      case SegmentKind::Affine: {
        const double lo = std::max(a, s.zeta_lo);
        const double hi = std::min(b, s.zeta_hi);
        if (hi > lo) lhs += s.slope * integrate_pc(f, lo, hi);
        break;
      }
      case SegmentKind::Jump: {
        if (s.zeta_lo > a && s.zeta_lo <= b) {
          lhs += f.value(s.zeta_lo) * (s.x_hi - s.x_lo);
        }
        break;
      }
      case SegmentKind::Flat:
        break;
    }
  }

  const GeneralizedInverse inv = map.inverse();
  const double ya = map.value(a);
  const double yb = map.value(b);
  double rhs = 0.0;
  for (const MapSegment& s : map.segments()) {
    if (s.kind == SegmentKind::Flat) continue;
    const double lo = std::max(ya, s.x_lo);
    const double hi = std::min(yb, s.x_hi);
    if (hi <= lo) continue;
    // Split the image interval where f(W(y)) can change value.
    std::vector<double> cuts{lo, hi};
    if (s.kind == SegmentKind::Affine && s.slope > 0.0) {
      for (double fb : f.breakpoints) {
        const double y = s.x_lo + s.slope * (fb - s.zeta_lo);
        if (y > lo && y < hi) cuts.push_back(y);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double len = cuts[k + 1] - cuts[k];
      if (len > 0.0) {
        rhs += f.value(inv.value(0.5 * (cuts[k] + cuts[k + 1]))) * len;
      }
    }
  }
  return {lhs, rhs, std::fabs(lhs - rhs)};
}

double derivative_bound_margin(const MonotoneFlowMap& map,
                               const Solution& sol) {
  double margin = 0.0;
  bool any = false;
  for (const MapSegment& s : map.segments()) {
    if (s.kind != SegmentKind::Affine) continue;
    const double q = 2.0 + map.time() * sol.cells()[s.source_cell].slope;
    const double bound = 0.25 * q * q;
    const double m = s.slope - bound;
    if (!any || m < margin) margin = m;
    any = true;
  }
  return margin;
}

double positive_energy(const Solution& sol, double a, double b, double t) {
  if (!(a < b)) throw std::invalid_argument("positive_energy: need a < b");
  const double xa = sol.label_state(a, t).x;
  const double xb = sol.label_state(b, t).x;
  return sol.frame_at(t).positive_energy_window(xa, xb);
}

double l1_translation_modulus(const PiecewiseConstant& g, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("translation modulus: eps must be > 0");
  }
  const auto shift_abs_diff = [&g](double y) {
    // D(y) = int |g(x+y) - g(x)| dx, exact for piecewise-constant g.
    std::vector<double> cuts;
    for (double b : g.breakpoints) {
      cuts.push_back(b);
      cuts.push_back(b - y);
    }
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double len = cuts[k + 1] - cuts[k];
      if (len <= 0.0) continue;
      const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      sum += std::fabs(g.value(mid + y) - g.value(mid)) * len;
    }
    return sum;
  };

  // D is affine between offsets where a shifted breakpoint crosses a fixed
  // one, so trapezoids on those subintervals integrate it exactly.
  std::set<double> crit{0.0, eps};
  for (double bi : g.breakpoints) {
    for (double bj : g.breakpoints) {
      const double y = bi - bj;
      if (y > 0.0 && y < eps) crit.insert(y);
    }
  }
  std::vector<double> ys(crit.begin(), crit.end());
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
    integral += 0.5 * (shift_abs_diff(ys[k]) + shift_abs_diff(ys[k + 1])) *
                (ys[k + 1] - ys[k]);
  }
  return integral / eps;
}

std::string segment_kind_name(SegmentKind k) {
  switch (k) {
    case SegmentKind::Affine: return "affine";
    case SegmentKind::Flat: return "flat";
    case SegmentKind::Jump: return "jump";
  }
  return "?";
}

}  // namespace hsx
