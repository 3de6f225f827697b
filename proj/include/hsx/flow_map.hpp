#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsx/solution.hpp"

namespace hsx {

enum class SegmentKind { Affine, Flat, Jump };

struct MapSegment {
  SegmentKind kind = SegmentKind::Affine;
  double zeta_lo = 0.0;
  double zeta_hi = 0.0;  // equals zeta_lo for Jump
  double x_lo = 0.0;
  double x_hi = 0.0;     // equals x_lo for Flat
  double slope = 0.0;    // dx/dzeta on Affine segments
  std::size_t source_cell = 0;  // first cell of the run behind the segment
};

// Right-continuous generalized inverse W(y) = inf{z : M(z) >= y}, defined
// on the image span of the map. Constant on the image of a jump.
class GeneralizedInverse {
 public:
  explicit GeneralizedInverse(const std::vector<MapSegment>& segments);
  double value(double y) const;
  double domain_lo() const { return y_lo_; }
  double domain_hi() const { return y_hi_; }

 private:
  std::vector<MapSegment> segs_;
  double y_lo_ = 0.0;
  double y_hi_ = 0.0;
};

// The label-to-position map zeta -> x_zeta(t) at a fixed time, built from
// rightmost characteristics: affine on alive cells, flat across collapsed
// runs, jumping over the opening width where a run holds open fans.
class MonotoneFlowMap {
 public:
  MonotoneFlowMap(double time, std::vector<MapSegment> segments);

  double time() const { return time_; }
  const std::vector<MapSegment>& segments() const { return segs_; }
  double domain_lo() const { return segs_.front().zeta_lo; }
  double domain_hi() const { return segs_.back().zeta_hi; }
  double image_lo() const { return segs_.front().x_lo; }
  double image_hi() const { return segs_.back().x_hi; }

  double value(double zeta) const;  // M(zeta), right-continuous
  GeneralizedInverse inverse() const { return GeneralizedInverse(segs_); }

 private:
  double time_ = 0.0;
  std::vector<MapSegment> segs_;
};

MonotoneFlowMap build_flow_map(const Solution& sol, double t);

// Compactly supported piecewise-constant tabulated function: values[i] on
// (breakpoints[i], breakpoints[i+1]), zero outside, right-continuous at
// its own breakpoints.
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;

  PiecewiseConstant(std::vector<double> bp, std::vector<double> vals);
  static PiecewiseConstant indicator(double lo, double hi);
  double value(double x) const;
};

struct ChangeOfVariablesResult {
  double lhs = 0.0;       // integral of f dM over (a, b]
  double rhs = 0.0;       // integral of f(W(y)) dy over [M(a), M(b)]
  double mismatch = 0.0;  // |lhs - rhs|
};

// Both sides of the Lebesgue-Stieltjes substitution for piecewise-constant
// f against a generated map, each evaluated by its own exact route.
ChangeOfVariablesResult stieltjes_change_of_variables_check(
    const PiecewiseConstant& f, const MonotoneFlowMap& map, double a,
    double b);

// Worst slope-versus-(2+t*w0)^2/4 margin over the affine segments; the
// dissipative construction saturates the bound, so the margin is zero.
double derivative_bound_margin(const MonotoneFlowMap& map,
                               const Solution& sol);

// Integral of max(w,0)^2 between the characteristics from labels a and b.
double positive_energy(const Solution& sol, double a, double b, double t);

// Averaged L1 translation modulus of g at offset eps:
//   (1/eps) * int_0^eps int |g(x+y)-g(x)| dx dy,  evaluated exactly.
double l1_translation_modulus(const PiecewiseConstant& g, double eps);

std::string segment_kind_name(SegmentKind k);

}  // namespace hsx
