#include <algorithm>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hsx/energy_report.hpp"
#include "test_util.hpp"

using namespace hsx;

namespace {

std::vector<std::pair<std::string, ContinuationPolicy>> cusp_policies() {
  const auto p = hsx::testutil::cusp();
  return {{"dissipative", ContinuationPolicy{}},
          {"half", ContinuationPolicy({{0, 0.5}})},
          {"full", ContinuationPolicy({{0, 1.0}})}};
}

}  // namespace

TEST_CASE("cusp energies order strictly past the blow-up") {
  const auto p = testutil::cusp();
  const auto grid = ledger_time_grid(p, 2.0, 16);
  const EnergyReport rep = compare(p, cusp_policies(), grid);
  REQUIRE(rep.policy_ids.size() == 3);
  CHECK(rep.all_ok);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] > 1.0) {
      CHECK(rep.series[0][k] == 0.0);
      CHECK(rep.series[1][k] == doctest::Approx(2.0));
      CHECK(rep.series[2][k] == doctest::Approx(4.0));
      CHECK(rep.bound[k] == 0.0);
    } else if (grid[k] < 1.0) {
      for (int s = 0; s < 3; ++s) CHECK(rep.series[s][k] == 4.0);
    }
  }
  CHECK(rep.verdicts[1].first_exceedance_t.has_value());
  CHECK(*rep.verdicts[1].first_exceedance_t > 1.0);
  CHECK(rep.verdicts[1].strict_after_event);
  CHECK(rep.verdicts[0].never_below_bound);
}

TEST_CASE("nondecreasing data admit no events and constant energy") {
  const InitialProfile p({0.0, 0.5, 1.0}, {2.0, 1.0}, 0.0);
  const auto grid = ledger_time_grid(p, 3.0, 8);
  // Uniform kappa attaches to nothing: identical to the dissipative run.
  const EnergyReport rep =
      compare(p, {{"dissipative", ContinuationPolicy{}},
                  {"sweep", ContinuationPolicy::uniform(p, 0.7)}},
              grid);
  CHECK(rep.all_ok);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(rep.series[0][k] == rep.bound[k]);
    CHECK(rep.series[1][k] == rep.bound[k]);
    CHECK(rep.bound[k] == p.total_energy());
  }
}

TEST_CASE("two-cell bound drops while the revived policy holds") {
  const auto p = testutil::two_cell();
  const auto grid = ledger_time_grid(p, 3.0, 12);
  const EnergyReport rep =
      compare(p, {{"dissipative", ContinuationPolicy{}},
                  {"revive", ContinuationPolicy({{1, 1.0}})}},
              grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 2.0) CHECK(rep.bound[k] == 2.0);
    if (grid[k] > 2.0) {
      CHECK(rep.bound[k] == 1.0);
      CHECK(rep.series[1][k] == 2.0);
    }
  }
}

TEST_CASE("compare requires the dissipative policy") {
  const auto p = testutil::cusp();
  CHECK_THROWS_AS(
      compare(p, {{"half", ContinuationPolicy({{0, 0.5}})}}, {0.0, 1.0}),
      std::invalid_argument);
}

TEST_CASE("compare is permutation invariant and deterministic") {
  const auto p = testutil::cusp();
  const auto grid = ledger_time_grid(p, 2.0, 16);
  auto pols = cusp_policies();
  const EnergyReport a = compare(p, pols, grid);
  std::reverse(pols.begin(), pols.end());
  const EnergyReport b = compare(p, pols, grid);
  for (std::size_t s = 0; s < 3; ++s) {
    const auto it = std::find(b.policy_ids.begin(), b.policy_ids.end(),
                              a.policy_ids[s]);
    REQUIRE(it != b.policy_ids.end());
    const std::size_t sb =
        static_cast<std::size_t>(it - b.policy_ids.begin());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(a.series[s][k] == b.series[sb][k]);
    }
  }
  const EnergyReport c = compare(p, cusp_policies(), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(a.bound[k] == c.bound[k]);
  }
}

TEST_CASE("energy series recover the policy: equal series means kappa zero") {
  std::mt19937 rng(61);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = testutil::random_profile(rng, 15);
    std::uniform_real_distribution<double> kap(0.0, 1.0);
    const ContinuationPolicy pol = ContinuationPolicy::uniform(p, kap(rng));
    const bool has_event = !pol.kappas().empty();
    const auto grid = ledger_time_grid(p, 6.0, 64);
    const EnergyReport r =
        compare(p, {{"dissipative", ContinuationPolicy{}}, {"probe", pol}},
                grid);
    bool equal = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (r.series[0][k] != r.series[1][k]) equal = false;
    }
    double max_kappa = 0.0;
    for (const auto& [i, kv] : pol.kappas()) max_kappa = std::max(max_kappa, kv);
    bool any_triggered = false;
    for (const CellMeta& c : cell_meta(p)) {
      if (std::isfinite(c.blowup_time) && c.blowup_time < 6.0 &&
          pol.kappas().count(c.index) && pol.kappas().at(c.index) > 0.0) {
        any_triggered = true;
      }
    }
    if (has_event && any_triggered && max_kappa > 0.0) {
      CHECK_FALSE(equal);
    } else {
      CHECK(equal);
    }
  }
}

TEST_CASE("energy converges to the initial energy as t drops to zero") {
  std::mt19937 rng(67);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = testutil::random_profile(rng, 20);
    const ContinuationSolution sol(p, ContinuationPolicy::uniform(p, 0.5));
    for (double t : {1e-3, 1e-6, 1e-9}) {
      CHECK(sol.total_energy_at(t) == p.total_energy());
    }
  }
}

TEST_CASE("window margins vanish for the dissipative solution") {
  std::mt19937 rng(71);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = testutil::random_profile(rng, 20);
    const DissipativeSolution sol(p);
    const auto grid = ledger_time_grid(p, 4.0, 32);
    std::uniform_real_distribution<double> zs(p.support_lo(), p.support_hi());
    double a = zs(rng), b = zs(rng);
    if (a > b) std::swap(a, b);
    const double m = window_energy_margin(sol, a, b, grid);
    CHECK(std::fabs(m) <= 1e-10);
  }
}

TEST_CASE("window margin counts the re-injected energy") {
  const auto p = testutil::cusp();
  const ContinuationSolution sol(p, ContinuationPolicy({{0, 1.0}}));
  const double m = window_energy_margin(sol, -1.0, 2.0, {2.0});
  CHECK(m == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(window_energy_margin(sol, 0.3, 0.3, {2.0}) == 0.0);
}

TEST_CASE("dissipative characterization identity") {
  SUBCASE("two-cell middle label") {
    const DissipativeSolution sol(testutil::two_cell());
    CHECK(dissipative_characterization_residual(sol, 0.0, 1.0) <= 1e-13);
    // Direct value: u = u0(0) + t/2 = 1.5 at t=1.
    CHECK(sol.label_state(0.0, 1.0).u == doctest::Approx(1.5));
  }
  SUBCASE("label left of the support") {
    const DissipativeSolution sol(testutil::two_cell());
    CHECK(dissipative_characterization_residual(sol, -3.0, 2.0) == 0.0);
  }
  SUBCASE("cusp right label at t=0.5") {
    const DissipativeSolution sol(testutil::cusp());
    CHECK(dissipative_characterization_residual(sol, 1.0, 0.5) <= 1e-13);
    CHECK(sol.label_state(1.0, 0.5).u == doctest::Approx(-1.0));
  }
  SUBCASE("random corpus, including across events") {
    std::mt19937 rng(73);
    for (int rep = 0; rep < 10; ++rep) {
      const auto p = testutil::random_profile(rng, 20);
      const DissipativeSolution sol(p);
      std::uniform_real_distribution<double> zs(p.support_lo() - 1.0,
                                                p.support_hi() + 1.0);
      std::uniform_real_distribution<double> ts(0.0, 5.0);
      for (int k = 0; k < 20; ++k) {
        const double res =
            dissipative_characterization_residual(sol, zs(rng), ts(rng));
        CHECK(res <= 1e-11 * std::max(1.0, p.total_energy()));
      }
    }
  }
  SUBCASE("re-injecting solutions are rejected") {
    const ContinuationSolution sol(testutil::cusp(),
                                   ContinuationPolicy({{0, 0.5}}));
    CHECK_THROWS_AS(dissipative_characterization_residual(sol, 0.5, 2.0),
                    std::invalid_argument);
  }
}
