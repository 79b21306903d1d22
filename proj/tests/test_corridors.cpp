#include <gtest/gtest.h>

#include <climits>
#include <random>

#include "fixtures.hpp"

using namespace pmp;

namespace {

OccupancyGrid random_grid(std::mt19937& rng, int rows, int cols, double density) {
  OccupancyGrid g(rows, cols, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (u(rng) < density) g.set_occupied({r, c});
    }
  }
  return g;
}

// Grid distance by repeated relaxation until nothing changes.
int relaxation_distance(const OccupancyGrid& g, Cell a, Cell b) {
  std::vector<int> d(static_cast<size_t>(g.rows()) * g.cols(), INT_MAX / 2);
  auto at = [&](Cell c) -> int& { return d[static_cast<size_t>(c.row) * g.cols() + c.col]; };
  at(a) = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int r = 0; r < g.rows(); ++r) {
      for (int c = 0; c < g.cols(); ++c) {
        if (!g.is_free({r, c})) continue;
        for (Cell n : {Cell{r + 1, c}, Cell{r - 1, c}, Cell{r, c + 1}, Cell{r, c - 1}}) {
          if (g.is_free(n) && at(n) + 1 < at({r, c})) {
            at({r, c}) = at(n) + 1;
            changed = true;
          }
        }
      }
    }
  }
  return at(b) >= INT_MAX / 2 ? -1 : at(b);
}

Scenario scenario_on(const OccupancyGrid& g, Vec2 p0, Vec2 pn, double w = 0.5) {
  Scenario s;
  s.grid = g;
  s.vehicle = {w, w, 1.0, 1.0};
  s.p0 = p0;
  s.pn = pn;
  return s;
}

}  // namespace

TEST(ShortestCellPath, StartEqualsGoal) {
  OccupancyGrid g(3, 3, 1.0);
  const auto p = shortest_cell_path(g, {1, 1}, {1, 1});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], (Cell{1, 1}));
}

TEST(ShortestCellPath, StraightCorridor) {
  OccupancyGrid g(1, 5, 1.0);
  const auto p = shortest_cell_path(g, {0, 0}, {0, 4});
  ASSERT_EQ(p.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(p[i], (Cell{0, i}));
}

TEST(ShortestCellPath, AroundABlockedCenterPrefersPlusX) {
  OccupancyGrid g(3, 3, 1.0);
  g.set_occupied({1, 1});
  const auto p = shortest_cell_path(g, {0, 0}, {2, 2});
  const std::vector<Cell> expected{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}};
  EXPECT_EQ(p, expected);
}

TEST(ShortestCellPath, UnreachableGoal) {
  OccupancyGrid g(3, 3, 1.0);
  for (int r = 0; r < 3; ++r) g.set_occupied({r, 1});
  EXPECT_THROW(shortest_cell_path(g, {0, 0}, {0, 2}), NoPathError);
}

TEST(ShortestCellPath, MatchesRelaxationOracle) {
  std::mt19937 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = random_grid(rng, 6, 7, 0.3);
    std::uniform_int_distribution<int> rr(0, 5), cc(0, 6);
    const Cell a{rr(rng), cc(rng)}, b{rr(rng), cc(rng)};
    if (!g.is_free(a) || !g.is_free(b)) continue;
    const int dist = relaxation_distance(g, a, b);
    if (dist < 0) {
      EXPECT_THROW(shortest_cell_path(g, a, b), NoPathError);
      continue;
    }
    const auto p = shortest_cell_path(g, a, b);
    ASSERT_EQ(static_cast<int>(p.size()) - 1, dist);
    EXPECT_EQ(p.front(), a);
    EXPECT_EQ(p.back(), b);
    for (size_t i = 1; i < p.size(); ++i) {
      EXPECT_EQ(std::abs(p[i].row - p[i - 1].row) + std::abs(p[i].col - p[i - 1].col), 1);
      EXPECT_TRUE(g.is_free(p[i]));
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(ExtendPath, EndpointsInsideTheirCells) {
  OccupancyGrid g(1, 5, 1.0);
  const auto s = scenario_on(g, {0.5, 0.5}, {4.5, 0.5});
  const auto path = shortest_cell_path(g, {0, 0}, {0, 4});
  const auto ext = extend_path(path, s);
  EXPECT_EQ(ext.cells, path);
  EXPECT_EQ(ext.prefix, 0u);
  EXPECT_EQ(ext.suffix, 0u);
}

TEST(ExtendPath, StartStraddlingTwoCells) {
  OccupancyGrid g(1, 6, 1.0);
  // Start centered on the border of cells 1 and 2, anchored in cell 2.
  const auto s = scenario_on(g, {2.0, 0.5}, {5.5, 0.5});
  const auto path = shortest_cell_path(g, g.cell_at(s.p0), g.cell_at(s.pn));
  ASSERT_EQ(path.front(), (Cell{0, 2}));
  const auto ext = extend_path(path, s);
  ASSERT_EQ(ext.cells.size(), path.size() + 1);
  EXPECT_EQ(ext.cells.front(), (Cell{0, 1}));
  EXPECT_EQ(ext.prefix, 1u);
}

TEST(ExtendPath, BothEndpointsOnFourCells) {
  OccupancyGrid g(6, 6, 1.0);
  const auto s = scenario_on(g, {1.0, 1.0}, {5.0, 5.0}, 0.8);
  const auto path = shortest_cell_path(g, g.cell_at(s.p0), g.cell_at(s.pn));
  const auto ext = extend_path(path, s);
  EXPECT_LE(ext.prefix, 3u);
  EXPECT_LE(ext.suffix, 3u);
  EXPECT_GE(ext.prefix, 1u);
  for (size_t i = 1; i < ext.cells.size(); ++i) {
    const Cell a = ext.cells[i - 1], b = ext.cells[i];
    EXPECT_EQ(std::abs(a.row - b.row) + std::abs(a.col - b.col), 1);
  }
  for (Cell c : occupied_cells(s.p0, s.vehicle, g)) {
    EXPECT_NE(std::find(ext.cells.begin(), ext.cells.end(), c), ext.cells.end());
  }
}

TEST(BuildCorridors, FreeGridStraightPathIsOneCorridor) {
  OccupancyGrid g(4, 6, 0.5);
  const auto s = scenario_on(g, {0.25, 0.75}, {2.75, 0.75}, 0.25);
  const auto seq = build_corridor_sequence(s);
  ASSERT_EQ(seq.size(), 1u);
  EXPECT_EQ(seq[0].box, g.extent());
}

TEST(BuildCorridors, FreeGridLPathPrunesToOneCorridor) {
  OccupancyGrid g(5, 5, 1.0);
  const auto s = scenario_on(g, {0.5, 0.5}, {4.5, 4.5});
  const auto seq = build_corridor_sequence(s);
  ASSERT_EQ(seq.size(), 1u);
  EXPECT_EQ(seq[0].box, g.extent());
}

TEST(BuildCorridors, LShapedRegionGivesTwoCorridors) {
  const auto s = fixtures::l_turn();
  const auto seq = build_corridor_sequence(s);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq[0].box, (Box{{0, 0}, {3, 1}}));
  EXPECT_EQ(seq[1].box, (Box{{2, 0}, {3, 3}}));
  EXPECT_EQ(seq.overlap(1), (Box{{2, 0}, {3, 1}}));
  EXPECT_FALSE(check_sequence(seq, s).has_value());
}

TEST(BuildCorridors, WalledGoalHasNoPath) {
  const auto s = fixtures::load("walled.json");
  EXPECT_THROW(build_corridor_sequence(s), NoPathError);
}

TEST(BuildCorridors, GrowingReachesAFixedPoint) {
  const auto s = fixtures::load("structured_demo.json");
  const auto seq = build_corridor_sequence(s);
  for (const auto& c : seq.corridors) {
    Corridor copy = c;
    EXPECT_FALSE(detail::grow_once(s.grid, copy));
  }
}

// Structural invariants over random cluttered maps.
TEST(BuildCorridors, RandomMapInvariants) {
  bench::BenchConfig cfg;
  cfg.seed = 77;
  cfg.density = 0.2;
  for (size_t i = 0; i < 60; ++i) {
    const auto s = bench::generate_instance(cfg, i);
    const auto seq = build_corridor_sequence(s);
    const auto problem = check_sequence(seq, s);
    EXPECT_FALSE(problem.has_value()) << "instance " << i << ": " << *problem;
    // The polyline through the overlap centers stays inside the union.
    std::vector<Vec2> nodes{s.p0};
    for (size_t k = 1; k < seq.size(); ++k) nodes.push_back(seq.overlap(k).center());
    nodes.push_back(s.pn);
    for (size_t k = 1; k < nodes.size(); ++k) {
      for (int j = 0; j <= 50; ++j) {
        const Vec2 q = nodes[k - 1] + (j / 50.0) * (nodes[k] - nodes[k - 1]);
        EXPECT_TRUE(seq.union_contains(q, 1e-12)) << "instance " << i;
      }
    }
  }
}

TEST(CorridorsJson, ExportsMetricBoxes) {
  const auto seq = build_corridor_sequence(fixtures::l_turn());
  const auto j = corridors_to_json(seq);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_DOUBLE_EQ(j[1]["y_max"].get<double>(), 3.0);
  EXPECT_DOUBLE_EQ(j[0]["x_min"].get<double>(), 0.0);
}
