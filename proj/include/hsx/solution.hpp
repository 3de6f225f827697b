#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hsx/frame.hpp"
#include "hsx/profile.hpp"

namespace hsx {

// One blow-up instant with every cell collapsing at that time (batch).
struct BlowupEvent {
  double time = 0.0;
  std::vector<std::size_t> cells;
};

enum class LabelSide { Rightmost, Leftmost };

// Characteristic data of a label at a fixed time. w is absent once the
// containing cell has collapsed (the label then rides a node) and exactly
// at breakpoints, where the slope is two-valued.
struct LabelState {
  double x = 0.0;
  double u = 0.0;
  std::optional<double> w;
};

// Shared machinery of the exact solutions. A solution is the initial
// profile plus a per-cell re-injection coefficient kappa >= 0 (all zero
// for the dissipative one); every frame quantity has a closed form in t.
class Solution : public FrameSource {
 public:
  ~Solution() override = default;

  const InitialProfile& profile() const { return profile_; }
  const std::vector<CellMeta>& cells() const { return cells_; }
  const std::vector<BlowupEvent>& events() const { return events_; }
  std::vector<double> event_times() const override;

  double kappa(std::size_t cell) const { return kappas_[cell]; }
  bool has_resurrection() const;

  Frame frame_at(double t, Limit lim = Limit::Value) const override;

  // Integral of w^2 over the line at time t, summed from the closed forms
  // (surviving original energies plus active re-injected energies).
  double total_energy_at(double t) const;

  // Position/value/slope of the characteristic from label zeta at time t.
  // Labels whose cell has collapsed ride the merged node; at a branch
  // point the requested side of the opened fan is taken (the map built in
  // flow_map uses Rightmost).
  LabelState label_state(double zeta, double t,
                         LabelSide side = LabelSide::Rightmost) const;

  // Node index the label's characteristic occupies at time t under the
  // side convention; nullopt while the label is strictly inside an alive
  // cell or outside the support.
  std::optional<std::size_t> label_node(double zeta, double t,
                                        LabelSide side) const;

 protected:
  Solution(InitialProfile profile, std::vector<double> kappas);

  InitialProfile profile_;
  std::vector<CellMeta> cells_;
  std::vector<double> kappas_;
  std::vector<BlowupEvent> events_;
};

}  // namespace hsx
