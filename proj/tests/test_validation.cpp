#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace pmp;

namespace {

std::vector<Sample> planned_samples(const Scenario& s) {
  const auto r = plan(s);
  EXPECT_TRUE(succeeded(r.report.status));
  return parse_samples_csv(samples_to_csv(sample(r.trajectory, 100.0)));
}

}  // namespace

TEST(ParseSamples, RejectsMalformedInput) {
  auto line_of = [](const std::string& text) {
    try {
      parse_samples_csv(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  EXPECT_EQ(line_of("time,x\n0,0\n"), 1);
  EXPECT_EQ(line_of("t,px,py,vx,vy,ax,ay\n0,0,0,0,0,0,0\n0.1,0,0,zero,0,0,0\n"), 3);
  EXPECT_EQ(line_of("t,px,py,vx,vy,ax,ay\n0,0,0,0,0,0\n"), 2);
  EXPECT_EQ(line_of("t,px,py,vx,vy,ax,ay\n"), 0);
  EXPECT_EQ(parse_samples_csv("t,px,py,vx,vy,ax,ay\r\n0,1,2,3,4,5,6\r\n").size(), 1u);
}

TEST(ValidateSamples, PlannerOutputPassesEveryCheck) {
  for (const char* name : {"l_turn.json", "structured_demo.json", "flip.json", "empty.json"}) {
    const auto s = fixtures::load(name);
    const auto v = validate_samples(planned_samples(s), s.grid, s.vehicle);
    EXPECT_TRUE(v.ok()) << name;
    EXPECT_EQ(v.checks.size(), 5u);
  }
}

TEST(ValidateSamples, SpeedingRowFailsTheVelocityBound) {
  const auto s = fixtures::l_turn();
  auto samples = planned_samples(s);
  ASSERT_GT(samples.size(), 100u);
  samples[40].v.x = 1.5 * s.vehicle.v_max;
  const auto v = validate_samples(samples, s.grid, s.vehicle);
  const auto& c = v.check("velocity bound");
  EXPECT_FALSE(c.passed());
  EXPECT_EQ(c.failures, 1u);
  EXPECT_EQ(c.first_row, 42u);  // header is line 1, sample 0 is line 2
  EXPECT_TRUE(v.check("collision").passed());
  EXPECT_FALSE(v.ok());
}

TEST(ValidateSamples, PathThroughAnObstacleFailsCollision) {
  const auto s = fixtures::l_turn();
  // Straight from start to goal across the blocked cell (1, 1).
  std::vector<Sample> samples;
  for (int i = 0; i <= 100; ++i) {
    const double f = i / 100.0;
    samples.push_back({3.0 * f, s.p0 + f * (s.pn - s.p0), (1.0 / 3.0) * (s.pn - s.p0), {0, 0}});
  }
  const auto v = validate_samples(samples, s.grid, s.vehicle);
  const auto& c = v.check("collision");
  EXPECT_FALSE(c.passed());
  EXPECT_GT(c.first_row, 2u);
  EXPECT_TRUE(v.check("velocity bound").passed());
}

TEST(ValidateSamples, TeleportFailsContinuity) {
  const auto s = fixtures::l_turn();
  auto samples = planned_samples(s);
  samples[30].p.x += 0.3;
  const auto v = validate_samples(samples, s.grid, s.vehicle);
  EXPECT_FALSE(v.check("continuity").passed());
  EXPECT_EQ(v.check("continuity").first_row, 32u);
}

TEST(ValidateSamples, RepeatedTimeFailsTheTimeCheck) {
  const auto s = fixtures::l_turn();
  auto samples = planned_samples(s);
  samples[10].t = samples[9].t;
  EXPECT_FALSE(validate_samples(samples, s.grid, s.vehicle).check("time").passed());
}

TEST(CheckTrajectory, IncludesExtremumTimes) {
  Trajectory traj;
  Primitive2D prim;
  prim.axis[0].alpha_start = 1.0;
  prim.axis[0].v = -1.0;
  prim.axis[0].p = 1.0;
  prim.axis[0].tau = {2.0, 0.0, 0.0};
  prim.axis[1].p = 1.0;
  prim.axis[1].v = 0.5;
  prim.axis[1].tau = {0.0, 2.0, 0.0};
  traj.pieces.push_back({0.0, prim});
  traj.t_move = 2.0;
  const auto with = check_times(traj, 3.0, true);
  const auto without = check_times(traj, 3.0, false);
  EXPECT_EQ(with.size(), without.size() + 1);
  EXPECT_NE(std::find(with.begin(), with.end(), 1.0), with.end());
}
