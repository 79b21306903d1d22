#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace pmp;

namespace {

struct Built {
  Scenario s;
  CorridorSequence seq;
  PrimitiveSelection sel;
  nlp::NlpProblem P;
};

Built build(const Scenario& s) {
  Built b{s, build_corridor_sequence(s), {}, {}};
  b.sel = select_primitives(b.seq, s);
  b.P = nlp::assemble(b.sel, b.seq, s);
  return b;
}

// Two overlapping two-row corridors on a free 3x3 grid; the straight line
// from start to goal releases the interior waypoint.
Built movable_case() {
  Scenario s;
  s.grid = OccupancyGrid(3, 3, 1.0);
  s.vehicle = {0.5, 0.5, 1.0, 2.0};
  s.p0 = {0.5, 0.5};
  s.pn = {2.5, 2.5};
  Built b{s, {}, {}, {}};
  b.seq.corridors = {make_corridor(s.grid, {0, 0}, {1, 2}), make_corridor(s.grid, {1, 0}, {2, 2})};
  b.sel = select_primitives(b.seq, s);
  b.P = nlp::assemble(b.sel, b.seq, s);
  return b;
}

size_t count_labelled(const nlp::Problem& prob, const std::string& prefix) {
  size_t n = 0;
  for (const auto& c : prob.inequalities) n += c.label.rfind(prefix, 0) == 0 ? 1 : 0;
  return n;
}

}  // namespace

TEST(Assemble, SinglePrimitiveCounts) {
  const auto b = build(fixtures::empty_map({0.5, 0.5}, {3.5, 2.0}));
  ASSERT_EQ(b.seq.size(), 1u);
  // 8 primitive variables, 2 free multipliers and their 2 slacks.
  EXPECT_EQ(b.P.problem.num_vars(), 12);
  EXPECT_EQ(b.P.problem.equalities.size(), 7u);
}

TEST(Assemble, LTurnCounts) {
  const auto b = build(fixtures::l_turn());
  ASSERT_EQ(b.sel.movable_count(), 0u);
  EXPECT_EQ(b.P.problem.num_vars(), 20);
  const size_t n = 2;
  EXPECT_EQ(b.P.problem.equalities.size(), 2 + n + 4 * n);
  EXPECT_EQ(count_labelled(b.P.problem, "velocity ") + count_labelled(b.P.problem, "coast velocity "),
            4 * n);
}

TEST(Assemble, MovableWaypointAddsTwoVariablesAndFourBounds) {
  const auto b = movable_case();
  ASSERT_TRUE(b.sel.movable[1]);
  PrimitiveSelection fixed = b.sel;
  fixed.movable[1] = false;
  const auto P0 = nlp::assemble(fixed, b.seq, b.s);
  EXPECT_EQ(b.P.problem.num_vars() - P0.problem.num_vars(), 2);
  EXPECT_EQ(b.P.problem.inequalities.size() - P0.problem.inequalities.size(), 2u);
  EXPECT_EQ(nlp::one_sided_inequality_count(b.P.problem) -
                nlp::one_sided_inequality_count(P0.problem),
            4u);
  EXPECT_EQ(b.P.problem.equalities.size(), P0.problem.equalities.size());
}

TEST(Assemble, WaypointOutsideItsCorridorIsRejected) {
  auto b = build(fixtures::l_turn());
  b.sel.waypoints[1] = {1.5, 0.5};  // inside corridor 0 but not corridor 1
  EXPECT_THROW(nlp::assemble(b.sel, b.seq, b.s), SelectionMismatch);
}

TEST(Assemble, ObjectiveIsTotalTimePlusSlackPenalty) {
  const auto b = build(fixtures::l_turn());
  auto x = nlp::initial_guess(b.P);
  x[b.P.layout.slack_start()] = 0.1;
  x[b.P.layout.slack_end()] = -0.2;
  EXPECT_NEAR(b.P.problem.objective(x),
              nlp::moving_time(b.P, x) + nlp::kSlackWeight * (0.01 + 0.04), 1e-12);
}

TEST(InitialGuess, PhaseRatios) {
  const auto b = build(fixtures::l_turn());
  const auto& L = b.P.layout;
  for (size_t k = 0; k < L.n; ++k) {
    const double base = nlp::default_tau_base(b.sel.waypoints[k], b.sel.waypoints[k + 1], b.s.vehicle);
    const auto x = nlp::initial_guess(b.P, 0.1 / base);
    for (int d = 0; d < 2; ++d) {
      EXPECT_NEAR(x[L.tau(k, d, 0)], 0.1, 1e-15);
      EXPECT_NEAR(x[L.tau(k, d, 1)], 0.7, 1e-15);
      EXPECT_NEAR(x[L.tau(k, d, 2)], 0.02, 1e-15);
    }
  }
}

TEST(InitialGuess, EndsExactlyOnTheWaypoints) {
  for (const auto& b : {build(fixtures::l_turn()), build(fixtures::load("structured_demo.json")),
                        movable_case()}) {
    const auto x = nlp::initial_guess(b.P);
    for (const auto& e : b.P.problem.equalities) {
      if (e.label.rfind("end position", 0) == 0) {
        EXPECT_NEAR(e.g(x), e.value, 1e-12) << e.label;
      }
    }
    EXPECT_EQ(x[b.P.layout.slack_start()], 0.0);
    for (size_t k = 0; k < b.P.layout.n; ++k) {
      for (int d = 0; d < 2; ++d) {
        for (int i = 0; i < 3; ++i) EXPECT_GE(x[b.P.layout.tau(k, d, i)], 0.0);
      }
    }
  }
}

TEST(Solve, StraightSingleCorridorMatchesTheSlowerAxis) {
  const auto b = build(fixtures::empty_map({0.5, 0.5}, {3.5, 2.0}));
  const auto r = nlp::solve(b.P.problem, nlp::initial_guess(b.P));
  ASSERT_TRUE(r.ok());
  const double tx = min_time_1d(0.5, 3.5, 0, 1, 2).duration();
  const double ty = min_time_1d(0.5, 2.0, 0, 1, 2).duration();
  EXPECT_NEAR(nlp::moving_time(b.P, r.x), std::max(tx, ty), 1e-6);
}

TEST(Solve, SolutionSatisfiesTheConstraintsAndObjectiveIsMovingTime) {
  const auto b = build(fixtures::l_turn());
  const auto r = nlp::solve(b.P.problem, nlp::initial_guess(b.P));
  ASSERT_TRUE(r.ok());
  EXPECT_LE(nlp::primal_violation(b.P.problem, r.x), 1e-6);
  const auto traj = nlp::to_trajectory(b.P, r.x);
  const double s0 = r.x[b.P.layout.slack_start()], sn = r.x[b.P.layout.slack_end()];
  EXPECT_NEAR(r.objective - nlp::kSlackWeight * (s0 * s0 + sn * sn), traj.t_move, 1e-9);
  EXPECT_NEAR(nlp::moving_time(b.P, r.x), traj.t_move, 1e-9);
  const auto check = check_trajectory(traj, b.s, &b.seq, 100.0, 1e-6);
  EXPECT_TRUE(check.ok());
  EXPECT_TRUE(nlp::extremum_violations(b.P, r.x).empty());
}

TEST(Repair, NoViolationLeavesTheProblemUnchanged) {
  auto b = build(fixtures::l_turn());
  const auto r = nlp::solve(b.P.problem, nlp::initial_guess(b.P));
  ASSERT_TRUE(r.ok());
  const size_t before = b.P.problem.inequalities.size();
  EXPECT_EQ(nlp::add_extremum_constraints(b.P, r.x), 0u);
  EXPECT_EQ(b.P.problem.inequalities.size(), before);
}

TEST(Repair, FirstPhaseExtremumAddsTwoRows) {
  auto b = build(fixtures::l_turn());
  auto x = nlp::initial_guess(b.P);
  const auto& L = b.P.layout;
  // Start moving left at 1.5 m/s while accelerating right at 2 m/s^2: the
  // turning point is 0.5625 m left of p0, outside the box x >= 0.25.
  x[L.v(0, 0)] = -1.5;
  x[L.tau(0, 0, 0)] = 1.0;
  const auto viol = nlp::extremum_violations(b.P, x);
  ASSERT_EQ(viol.size(), 1u);
  EXPECT_EQ(viol[0].phase, 0);
  EXPECT_NEAR(viol[0].position, 0.5 - 1.5 * 1.5 / 4.0, 1e-12);
  const size_t before = b.P.problem.inequalities.size();
  EXPECT_EQ(nlp::add_extremum_constraints(b.P, x), 2u);
  EXPECT_EQ(b.P.problem.inequalities.size(), before + 2);
  // The new rows bound the extremum position.
  const auto& lower = b.P.problem.inequalities[before];
  EXPECT_NEAR(lower.g(x), viol[0].position, 1e-12);
  // Repeating the call does not duplicate the rows.
  EXPECT_EQ(nlp::add_extremum_constraints(b.P, x), 0u);
}

TEST(Jacobian, MatchesFiniteDifferences) {
  for (const auto& b : {build(fixtures::empty_map({0.5, 0.5}, {3.5, 2.0})), build(fixtures::l_turn()),
                        build(fixtures::load("structured_demo.json")), movable_case()}) {
    EXPECT_LT(oracles::jacobian_fd_error(b.P.problem, nlp::initial_guess(b.P), 20, 3), 1e-6);
  }
}

TEST(ProblemJson, ListsVariablesAndRows) {
  const auto b = build(fixtures::l_turn());
  const auto j = nlp::problem_to_json(b.P);
  EXPECT_EQ(j["variables"].size(), 20u);
  EXPECT_EQ(j["variables"][0], "v0x");
  EXPECT_EQ(j["equalities"].size(), b.P.problem.equalities.size());
  EXPECT_TRUE(j["inequalities"][0]["lo"].is_number());
}
