#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hsx/continuation.hpp"
#include "hsx/dissipative.hpp"
#include "test_util.hpp"

using namespace hsx;

TEST_CASE("cusp continuation reproduces the one-parameter family") {
  const auto p = testutil::cusp();
  // Fan width k*(t-1)^2 corresponds to kappa = 4k/e = k here (e = 4).
  const ContinuationPolicy pol({{0, 0.5}});
  const Frame f = continue_with(p, pol, 2.0);
  REQUIRE(f.cells.size() == 1);
  CHECK(f.cells[0].kind == CellKind::Fan);
  CHECK(f.cells[0].width == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f.cells[0].slope == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.u.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.energy_quadrature() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("kappa = 0 reproduces the dissipative frames bit for bit") {
  std::mt19937 rng(31);
  for (int rep = 0; rep < 8; ++rep) {
    const auto p = testutil::random_profile(rng, 25);
    const DissipativeSolution dis(p);
    const ContinuationSolution con(p, ContinuationPolicy{});
    std::uniform_real_distribution<double> ts(0.0, 5.0);
    for (int k = 0; k < 30; ++k) {
      const double t = ts(rng);
      const Frame a = dis.frame_at(t);
      const Frame b = con.frame_at(t);
      REQUIRE(a.x.size() == b.x.size());
      for (std::size_t j = 0; j < a.x.size(); ++j) {
        CHECK(a.x[j] == b.x[j]);
        CHECK(a.u[j] == b.u[j]);
      }
      for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].width == b.cells[i].width);
        CHECK(a.cells[i].slope == b.cells[i].slope);
        CHECK(a.cells[i].energy == b.cells[i].energy);
      }
    }
  }
}

TEST_CASE("policy validation") {
  const auto p = testutil::two_cell();
  CHECK_THROWS_AS(ContinuationPolicy({{1, -0.5}}).validate(p),
                  std::invalid_argument);
  // Cell 0 has positive slope: no blow-up to continue from.
  CHECK_THROWS_AS(ContinuationPolicy({{0, 0.5}}).validate(p),
                  std::invalid_argument);
  CHECK_THROWS_AS(ContinuationPolicy({{7, 0.5}}).validate(p),
                  std::invalid_argument);
  CHECK_NOTHROW(ContinuationPolicy({{1, 0.5}}).validate(p));
}

TEST_CASE("full re-injection restores the initial energy") {
  const auto p = testutil::two_cell();
  const ContinuationSolution sol(p, ContinuationPolicy({{1, 1.0}}));
  CHECK(sol.total_energy_at(1.0) == 2.0);
  CHECK(sol.total_energy_at(2.0) == 1.0);  // fan not yet contributing at T
  for (double t : {2.5, 3.0, 10.0}) {
    CHECK(sol.total_energy_at(t) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sol.frame_at(t).energy_quadrature() ==
          doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("energy is monotone in each kappa") {
  const auto p = testutil::two_cell();
  double prev = -1.0;
  for (double kap : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const ContinuationSolution sol(p, ContinuationPolicy({{1, kap}}));
    const double e = sol.total_energy_at(3.0);
    CHECK(e >= prev);
    prev = e;
  }
  // Strictly increasing once past the event.
  const ContinuationSolution a(p, ContinuationPolicy({{1, 0.2}}));
  const ContinuationSolution b(p, ContinuationPolicy({{1, 0.6}}));
  CHECK(a.total_energy_at(2.5) < b.total_energy_at(2.5));
  CHECK(a.total_energy_at(1.5) == b.total_energy_at(1.5));
}

TEST_CASE("fan cells keep their re-injected energy and never blow up") {
  const auto p = testutil::cusp();
  const ContinuationSolution sol(p, ContinuationPolicy({{0, 0.7}}));
  for (double t : {1.1, 1.5, 2.0, 4.0, 8.0}) {
    const Frame f = sol.frame_at(t);
    CHECK(f.cells[0].kind == CellKind::Fan);
    CHECK(f.cells[0].slope > 0.0);
    const double we = f.cells[0].slope * f.cells[0].slope * f.cells[0].width;
    CHECK(we == doctest::Approx(0.7 * 4.0).epsilon(1e-13));
  }
}

TEST_CASE("adjacent cells collapsing together open adjacent fans") {
  // Both cells share T = 1; their fans open at the same merged point.
  const InitialProfile p({0.0, 1.0, 2.0}, {-2.0, -2.0}, 0.0);
  const ContinuationSolution sol(p, ContinuationPolicy({{0, 1.0}, {1, 0.25}}));
  const Frame f = sol.frame_at(2.0);
  CHECK(f.cells[0].kind == CellKind::Fan);
  CHECK(f.cells[1].kind == CellKind::Fan);
  CHECK(f.cells[0].width == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.cells[1].width == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(f.energy_quadrature() == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("extremal characteristics cross fans born at arrival, not before") {
  // Right cell collapses first: its fan is already open when the left
  // cell's labels arrive, so they stop at the shared edge.
  const InitialProfile blocked({0.0, 1.0, 2.0}, {-1.0, -2.0}, 0.0);
  const ContinuationSolution sb(blocked,
                                ContinuationPolicy({{0, 1.0}, {1, 1.0}}));
  const double t = 3.0;
  const Frame fb = sb.frame_at(t);
  CHECK(sb.label_state(0.5, t).x == fb.x[1]);
  CHECK(sb.label_state(1.5, t).x == fb.x[2]);

  // Left cell collapses first: when the right cell later dies, the left
  // labels sit exactly at that collision and cross its fan too.
  const InitialProfile chained({0.0, 1.0, 2.0}, {-2.0, -1.0}, 0.0);
  const ContinuationSolution sc(chained,
                                ContinuationPolicy({{0, 1.0}, {1, 1.0}}));
  const Frame fc = sc.frame_at(t);
  CHECK(sc.label_state(0.5, t).x == fc.x[2]);
  CHECK(sc.label_state(1.5, t).x == fc.x[2]);
}
