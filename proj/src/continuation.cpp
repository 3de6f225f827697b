#include "hsx/continuation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hsx {

ContinuationPolicy ContinuationPolicy::uniform(const InitialProfile& profile,
                                               double kappa) {
  std::map<std::size_t, double> kap;
  for (const CellMeta& c : cell_meta(profile)) {
    if (std::isfinite(c.blowup_time)) kap[c.index] = kappa;
  }
  return ContinuationPolicy(std::move(kap));
}

bool ContinuationPolicy::dissipative() const {
  for (const auto& [i, k] : kappas_) {
    if (k > 0.0) return false;
  }
  return true;
}

void ContinuationPolicy::validate(const InitialProfile& profile) const {
  const auto cells = cell_meta(profile);
  for (const auto& [i, k] : kappas_) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("policy: kappa for cell " +
                                  std::to_string(i) + " must be >= 0");
    }
    if (i >= cells.size()) {
      throw std::invalid_argument("policy: cell index " + std::to_string(i) +
                                  " out of range");
    }
    if (!std::isfinite(cells[i].blowup_time)) {
      throw std::invalid_argument("policy: cell " + std::to_string(i) +
                                  " never blows up, nothing to continue");
    }
  }
}

std::vector<double> ContinuationPolicy::dense_kappas(
    std::size_t cell_count) const {
  std::vector<double> out(cell_count, 0.0);
  for (const auto& [i, k] : kappas_) out[i] = k;
  return out;
}

namespace {

std::vector<double> validated_kappas(const InitialProfile& profile,
                                     const ContinuationPolicy& pol) {
  pol.validate(profile);
  return pol.dense_kappas(profile.cell_count());
}

}  // namespace

ContinuationSolution::ContinuationSolution(InitialProfile profile,
                                           const ContinuationPolicy& pol)
    : Solution(profile, validated_kappas(profile, pol)), policy_(pol) {}

Frame continue_with(const InitialProfile& profile,
                    const ContinuationPolicy& policy, double t) {
  if (t < 0.0) throw std::invalid_argument("continue_with: t must be >= 0");
  return ContinuationSolution(profile, policy).frame_at(t);
}

}  // namespace hsx
