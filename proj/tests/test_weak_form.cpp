#include <stdexcept>
#include "doctest.h"
#include "hsx/continuation.hpp"
#include "hsx/dissipative.hpp"
#include "hsx/weak_form.hpp"
#include "test_util.hpp"

using namespace hsx;

TEST_CASE("dissipative cusp satisfies the weak form") {
  const DissipativeSolution sol(testutil::cusp());
  const SpaceTimeWindow win{-1.0, 2.0, 0.0, 2.0};
  const auto r = weak_residual(sol, win);
  CHECK(r.converged);
  CHECK(r.residual <= 1e-6);
}

TEST_CASE("re-injected cusp satisfies the weak form") {
  const ContinuationSolution sol(testutil::cusp(),
                                 ContinuationPolicy({{0, 1.0}}));
  const SpaceTimeWindow win{-1.0, 2.0, 0.0, 2.0};
  const auto r = weak_residual(sol, win);
  CHECK(r.converged);
  CHECK(r.residual <= 1e-6);
}

TEST_CASE("two-cell datum with partial re-injection satisfies the weak form") {
  const ContinuationSolution sol(testutil::two_cell(),
                                 ContinuationPolicy({{1, 0.5}}));
  const SpaceTimeWindow win{-1.5, 4.0, 0.0, 3.0};
  const auto r = weak_residual(sol, win);
  CHECK(r.converged);
  CHECK(r.residual <= 1e-6);
}

TEST_CASE("a corrupted slope is caught by the residual") {
  const DissipativeSolution base(testutil::cusp());
  const ScaledSlopeSource bad(base, 0, 1.1);
  const SpaceTimeWindow win{-1.0, 2.0, 0.0, 2.0};
  const auto r = weak_residual(bad, win);
  CHECK(r.residual > 1e-2);
}

TEST_CASE("window validation") {
  const DissipativeSolution sol(testutil::cusp());
  CHECK_THROWS_AS(weak_residual(sol, {1.0, -1.0, 0.0, 2.0}),
                  std::invalid_argument);
}
