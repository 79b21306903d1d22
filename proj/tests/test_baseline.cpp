#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace pmp;

TEST(Baseline, OneAxisMotionIsNearTheClosedForm) {
  const auto s = fixtures::empty_map({0.5, 1.0}, {3.5, 1.0});
  const auto seq = build_corridor_sequence(s);
  ASSERT_EQ(seq.size(), 1u);
  const int N = 30;
  const auto r = solve_baseline(seq, s, N);
  ASSERT_EQ(r.report.status, PlanStatus::Solved);
  const double exact = fixtures::rest_to_rest_time(3.0, 1.0, 2.0);
  const double step = r.report.t_move / N;
  EXPECT_GE(r.report.t_move, exact - 1e-6);
  EXPECT_LE(r.report.t_move, exact + step);
}

TEST(Baseline, LTurnAgreesWithThePlannerToOneGridStep) {
  // Piecewise-constant control can only approximate the bang-coast-bang
  // optimum, so the gap is bounded by the grid step rather than signed.
  const auto s = fixtures::l_turn();
  const auto pmp = plan(s);
  const int N = 30;
  const auto r = solve_baseline(pmp.corridors, s, N);
  ASSERT_EQ(r.report.status, PlanStatus::Solved);
  EXPECT_LE(std::abs(r.report.t_move - pmp.report.t_move), r.report.t_move / N);
}

TEST(Baseline, FinerGridIsNoSlower) {
  for (const auto& s : {fixtures::l_turn(), fixtures::load("structured_demo.json")}) {
    const auto seq = build_corridor_sequence(s);
    const auto coarse = solve_baseline(seq, s, 30);
    const auto fine = solve_baseline(seq, s, 60);
    ASSERT_EQ(coarse.report.status, PlanStatus::Solved);
    ASSERT_EQ(fine.report.status, PlanStatus::Solved);
    EXPECT_LE(fine.report.t_move, coarse.report.t_move + 1e-6);
  }
}

TEST(Baseline, ResimulatedControlsReproduceTheGridStates) {
  const auto s = fixtures::load("structured_demo.json");
  const auto seq = build_corridor_sequence(s);
  const auto r = solve_baseline(seq, s, 30);
  ASSERT_EQ(r.report.status, PlanStatus::Solved);
  const auto& L = r.ocp.layout;
  // Each interval starts on its grid state and must land on the next one.
  for (int i = 0; i < L.intervals(); ++i) {
    const auto end = integrate_primitive(r.trajectory.pieces[static_cast<size_t>(i)].prim);
    for (int d = 0; d < 2; ++d) {
      EXPECT_NEAR(end.p[d], r.x[L.p(i + 1, d)], 1e-9);
      EXPECT_NEAR(end.v[d], r.x[L.v(i + 1, d)], 1e-9);
    }
  }
  EXPECT_NEAR(r.trajectory.at(r.trajectory.t_move).p.x, s.pn.x, 1e-8);
}

TEST(Baseline, GridPointsRespectTheBounds) {
  const auto s = fixtures::l_turn();
  const auto seq = build_corridor_sequence(s);
  const auto r = solve_baseline(seq, s, 30);
  ASSERT_EQ(r.report.status, PlanStatus::Solved);
  const auto& L = r.ocp.layout;
  for (int g = 0; g < L.points(); ++g) {
    const Vec2 p{r.x[L.p(g, 0)], r.x[L.p(g, 1)]};
    EXPECT_TRUE(seq.inflated_union_contains(p, s.vehicle, 1e-6));
    EXPECT_LE(std::abs(r.x[L.v(g, 0)]), s.vehicle.v_max + 1e-6);
  }
  for (int i = 0; i < L.intervals(); ++i) {
    EXPECT_LE(std::abs(r.x[L.a(i, 1)]), s.vehicle.a_max + 1e-6);
  }
}

TEST(IntersampleViolations, PlannerOutputHasNone) {
  bench::BenchConfig cfg;
  cfg.seed = 5;
  for (size_t i = 0; i < 15; ++i) {
    const auto s = bench::generate_instance(cfg, i);
    const auto r = plan(s);
    ASSERT_TRUE(succeeded(r.report.status));
    EXPECT_EQ(intersample_violation_count(r.trajectory, r.corridors, s.vehicle), 0u);
  }
}

TEST(IntersampleViolations, CountsSamplesOutsideTheCorridors) {
  const auto s = fixtures::l_turn();
  const auto seq = build_corridor_sequence(s);
  // Straight across the blocked corner.
  Trajectory traj;
  Primitive2D prim;
  for (int d = 0; d < 2; ++d) {
    prim.axis[d].p = s.p0[d];
    prim.axis[d].v = (s.pn[d] - s.p0[d]) / 2.0;
    prim.axis[d].tau = {0.0, 2.0, 0.0};
  }
  traj.pieces.push_back({0.0, prim});
  traj.t_move = 2.0;
  EXPECT_GT(intersample_violation_count(traj, seq, s.vehicle), 50u);
}
