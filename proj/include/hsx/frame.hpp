#pragma once

#include <cstddef>
#include <vector>

namespace hsx {

// Limit side for time evaluation: Value is the solution's convention at t
// (a cell is already collapsed at its blow-up instant, a fan contributes
// only after it), Lower/Upper are the one-sided limits. One-step
// integrators need Lower when a step ends on an event and Upper when one
// starts there.
enum class Limit { Value, Lower, Upper };

enum class CellKind {
  Interior,   // original cell, still alive
  Collapsed,  // zero-width marker of a collapsed cell
  Fan         // self-similar cell re-injected at a blow-up point
};

struct FrameCell {
  CellKind kind = CellKind::Interior;
  std::size_t source = 0;  // original cell index
  double width = 0.0;      // x[j+1] - x[j]
  double slope = 0.0;      // w on the open cell; 0 for zero-width markers
  double energy = 0.0;     // exact integral of w^2 over the cell
};

// Snapshot of a piecewise-linear solution profile at one time.
// Node positions are nondecreasing; u is continuous across nodes and
// constant beyond the support.
struct Frame {
  double time = 0.0;
  std::vector<double> x;         // node positions, size cells+1
  std::vector<double> u;         // values at the nodes
  std::vector<FrameCell> cells;

  std::size_t cell_count() const { return cells.size(); }

  double eval_u(double xq) const;

  // F(xq) = integral of w^2 over (-inf, xq].
  double forcing(double xq) const;

  // Bookkeeping route: sum of stored cell energies.
  double energy_total() const;

  // Geometry route: sum of slope^2 * width over the cells.
  double energy_quadrature() const;

  // Integral of w^2 (resp. max(w,0)^2) over the window [xa, xb].
  double energy_window(double xa, double xb) const;
  double positive_energy_window(double xa, double xb) const;
};

// Minimal interface for anything that can produce frames over time; the
// weak-form checker works against this so that deliberately corrupted
// sources can be tested alongside genuine solutions.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual Frame frame_at(double t, Limit lim = Limit::Value) const = 0;
  virtual std::vector<double> event_times() const = 0;
};

}  // namespace hsx
