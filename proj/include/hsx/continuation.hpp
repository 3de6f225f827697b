#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "hsx/solution.hpp"

namespace hsx {

// Per-event re-injection coefficients: kappa(i) is the fraction of cell
// i's pre-blow-up energy put back as a self-similar fan (slope 2/(t-T),
// width kappa*e/4*(t-T)^2). An empty map is the dissipative policy.
class ContinuationPolicy {
 public:
  ContinuationPolicy() = default;
  explicit ContinuationPolicy(std::map<std::size_t, double> kappas)
      : kappas_(std::move(kappas)) {}

  // Uniform kappa applied to every blow-up event of the profile.
  static ContinuationPolicy uniform(const InitialProfile& profile,
                                    double kappa);

  const std::map<std::size_t, double>& kappas() const { return kappas_; }
  bool dissipative() const;

  // Throws if a coefficient is negative, refers to a nonexistent cell, or
  // sits on a cell that never blows up.
  void validate(const InitialProfile& profile) const;

  std::vector<double> dense_kappas(std::size_t cell_count) const;

 private:
  std::map<std::size_t, double> kappas_;
};

// Weak continuation of the dissipative solution under a policy: identical
// to it up to the first re-injection, after which each triggered blow-up
// point grows a fan and every node to its right feels the extra energy.
class ContinuationSolution : public Solution {
 public:
  ContinuationSolution(InitialProfile profile, const ContinuationPolicy& pol);

  const ContinuationPolicy& policy() const { return policy_; }

 private:
  ContinuationPolicy policy_;
};

Frame continue_with(const InitialProfile& profile,
                    const ContinuationPolicy& policy, double t);

}  // namespace hsx
