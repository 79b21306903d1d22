#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmp/errors.hpp"
#include "pmp/geometry.hpp"
#include "pmp/world.hpp"

namespace pmp {

// Axis-aligned free rectangle covering the inclusive cell range [lo, hi].
struct Corridor {
  Cell lo;
  Cell hi;
  Box box;

  int cell_count() const { return (hi.row - lo.row + 1) * (hi.col - lo.col + 1); }
  bool contains(Cell c) const {
    return c.row >= lo.row && c.row <= hi.row && c.col >= lo.col &&
           c.col <= hi.col;
  }
  // Admissible box for the vehicle center.
  Box inflated(const Vehicle& v) const {
    return box.shrunk(0.5 * v.width, 0.5 * v.length);
  }
  friend bool operator==(const Corridor& a, const Corridor& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

struct CorridorSequence {
  std::vector<Corridor> corridors;

  size_t size() const { return corridors.size(); }
  const Corridor& operator[](size_t i) const { return corridors[i]; }

  // Intersection of corridors k-1 and k, k = 1..n-1.
  Box overlap(size_t k) const {
    return intersection(corridors[k - 1].box, corridors[k].box);
  }
  // Overlap shrunk by half the vehicle extent on every side.
  Box shrunk_overlap(size_t k, const Vehicle& v) const {
    return overlap(k).shrunk(0.5 * v.width, 0.5 * v.length);
  }
  bool union_contains(Vec2 p, double tol = 0.0) const {
    for (const auto& c : corridors) {
      if (c.box.contains(p, tol)) return true;
    }
    return false;
  }
  bool inflated_union_contains(Vec2 p, const Vehicle& v,
                               double tol = 0.0) const {
    for (const auto& c : corridors) {
      if (c.inflated(v).contains(p, tol)) return true;
    }
    return false;
  }
};

inline Corridor make_corridor(const OccupancyGrid& grid, Cell lo, Cell hi) {
  return {lo, hi, grid.cell_range_box(lo, hi)};
}

// Breadth-first search over 4-connected free cells. Neighbors are expanded in
// the order +x, -x, +y, -y so the result is deterministic.
inline std::vector<Cell> shortest_cell_path(const OccupancyGrid& grid,
                                            Cell start, Cell goal) {
  if (!grid.is_free(start) || !grid.is_free(goal)) {
    throw ValidationError("start and goal cells must be free");
  }
  const int rows = grid.rows();
  const int cols = grid.cols();
  auto index = [cols](Cell c) { return c.row * cols + c.col; };
  std::vector<int> parent(static_cast<size_t>(rows) * cols, -1);
  std::vector<char> seen(parent.size(), 0);
  std::deque<Cell> queue{start};
  seen[index(start)] = 1;
  constexpr int kDr[4] = {0, 0, 1, -1};
  constexpr int kDc[4] = {1, -1, 0, 0};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (c == goal) break;
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.row + kDr[k], c.col + kDc[k]};
      if (!grid.is_free(n) || seen[index(n)]) continue;
      seen[index(n)] = 1;
      parent[index(n)] = index(c);
      queue.push_back(n);
    }
  }
  if (!seen[index(goal)]) throw NoPathError("goal cell is unreachable");
  std::vector<Cell> path;
  for (int i = index(goal); i != -1; i = parent[i]) {
    path.push_back({i / cols, i % cols});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Cell sequence with the footprint cells of both endpoints attached. The
// first `prefix` cells come from the start footprint, the last `suffix` from
// the goal footprint.
struct ExtendedPath {
  std::vector<Cell> cells;
  size_t prefix = 0;
  size_t suffix = 0;
};

namespace detail {

inline bool adjacent(Cell a, Cell b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
}

// Orders the footprint block so consecutive cells are 4-adjacent and the walk
// ends at `anchor`.
inline std::vector<Cell> chain_ending_at(std::vector<Cell> block, Cell anchor) {
  std::erase(block, anchor);
  std::vector<Cell> out;
  if (block.size() <= 1) {
    out = block;
  } else if (block.size() == 3) {
    // 2x2 block: walk around the square, finishing next to the anchor.
    Cell same_col{}, diagonal{}, same_row{};
    for (Cell c : block) {
      if (c.col == anchor.col) {
        same_col = c;
      } else if (c.row == anchor.row) {
        same_row = c;
      } else {
        diagonal = c;
      }
    }
    out = {same_row, diagonal, same_col};
  } else {
    // Larger blocks only arise for vehicles bigger than a cell, which the
    // planner rejects; keep a deterministic order.
    out = block;
  }
  out.push_back(anchor);
  return out;
}

}  // namespace detail

// S(p0) ++ path ++ S(pn) with adjacent repeats removed.
inline ExtendedPath extend_path(const std::vector<Cell>& path,
                                const Scenario& scenario) {
  if (path.empty()) throw ValidationError("path must not be empty");
  const auto head = detail::chain_ending_at(
      occupied_cells(scenario.p0, scenario.vehicle, scenario.grid),
      path.front());
  auto tail = detail::chain_ending_at(
      occupied_cells(scenario.pn, scenario.vehicle, scenario.grid),
      path.back());
  std::reverse(tail.begin(), tail.end());

  ExtendedPath out;
  auto push = [&out](Cell c) {
    if (out.cells.empty() || out.cells.back() != c) {
      out.cells.push_back(c);
      return true;
    }
    return false;
  };
  for (Cell c : head) push(c);
  out.prefix = out.cells.size() - 1;
  for (Cell c : path) push(c);
  const size_t before_tail = out.cells.size();
  for (Cell c : tail) push(c);
  out.suffix = out.cells.size() - before_tail;
  return out;
}

namespace detail {

// Splits a cell walk into maximal same-row / same-column runs. Consecutive runs
// share their turn cell.
inline std::vector<std::pair<Cell, Cell>> split_runs(
    const std::vector<Cell>& cells) {
  std::vector<std::pair<Cell, Cell>> runs;
  if (cells.empty()) return runs;
  auto bbox_of = [&](size_t a, size_t b) {
    Cell lo = cells[a], hi = cells[a];
    for (size_t i = a; i <= b; ++i) {
      lo = {std::min(lo.row, cells[i].row), std::min(lo.col, cells[i].col)};
      hi = {std::max(hi.row, cells[i].row), std::max(hi.col, cells[i].col)};
    }
    return std::pair{lo, hi};
  };
  if (cells.size() == 1) {
    runs.push_back(bbox_of(0, 0));
    return runs;
  }
  size_t start = 0;
  bool horizontal = cells[0].row == cells[1].row;
  for (size_t i = 1; i + 1 < cells.size(); ++i) {
    const bool next_horizontal = cells[i].row == cells[i + 1].row;
    if (next_horizontal != horizontal) {
      runs.push_back(bbox_of(start, i));
      start = i;
      horizontal = next_horizontal;
    }
  }
  runs.push_back(bbox_of(start, cells.size() - 1));
  return runs;
}

inline bool range_free(const OccupancyGrid& grid, Cell lo, Cell hi) {
  for (int r = lo.row; r <= hi.row; ++r) {
    for (int c = lo.col; c <= hi.col; ++c) {
      if (!grid.is_free({r, c})) return false;
    }
  }
  return true;
}

// One enlargement attempt per side in the order -x, +x, -y, +y.
inline bool grow_once(const OccupancyGrid& grid, Corridor& c) {
  bool grew = false;
  if (range_free(grid, {c.lo.row, c.lo.col - 1}, {c.hi.row, c.lo.col - 1})) {
    --c.lo.col;
    grew = true;
  }
  if (range_free(grid, {c.lo.row, c.hi.col + 1}, {c.hi.row, c.hi.col + 1})) {
    ++c.hi.col;
    grew = true;
  }
  if (range_free(grid, {c.lo.row - 1, c.lo.col}, {c.lo.row - 1, c.hi.col})) {
    --c.lo.row;
    grew = true;
  }
  if (range_free(grid, {c.hi.row + 1, c.lo.col}, {c.hi.row + 1, c.hi.col})) {
    ++c.hi.row;
    grew = true;
  }
  if (grew) c = make_corridor(grid, c.lo, c.hi);
  return grew;
}

inline bool covered_by(const Corridor& c, const Corridor* a, const Corridor* b) {
  for (int r = c.lo.row; r <= c.hi.row; ++r) {
    for (int col = c.lo.col; col <= c.hi.col; ++col) {
      const Cell cell{r, col};
      if (!((a && a->contains(cell)) || (b && b->contains(cell)))) return false;
    }
  }
  return true;
}

// Removes one redundant corridor (or a run of them). Returns true if the
// sequence changed.
inline bool prune_once(std::vector<Corridor>& cs) {
  const size_t n = cs.size();
  for (size_t i = 0; i < n && cs.size() > 1; ++i) {
    const Corridor* prev = i > 0 ? &cs[i - 1] : nullptr;
    const Corridor* next = i + 1 < n ? &cs[i + 1] : nullptr;
    if (covered_by(cs[i], prev, next) &&
        (!prev || !next || overlaps_with_area(prev->box, next->box))) {
      cs.erase(cs.begin() + static_cast<long>(i));
      return true;
    }
    // Shortcut: a later corridor overlapping this one makes everything in
    // between redundant. j = i + 2 is the neighbor-of-neighbor test.
    for (size_t j = n - 1; j >= i + 2 && j < n; --j) {
      if (overlaps_with_area(cs[i].box, cs[j].box)) {
        cs.erase(cs.begin() + static_cast<long>(i + 1),
                 cs.begin() + static_cast<long>(j));
        return true;
      }
    }
  }
  return false;
}

}  // namespace detail

struct CorridorBuildStats {
  int passes = 0;
};

// Splits the extended path into row/column runs, grows every corridor to a
// fixed point, and prunes redundant corridors after each enlargement pass.
inline CorridorSequence build_corridors(const ExtendedPath& path,
                                        const OccupancyGrid& grid,
                                        CorridorBuildStats* stats = nullptr) {
  const auto& cells = path.cells;
  if (cells.empty()) throw DegenerateSequence("empty cell path");
  for (Cell c : cells) {
    if (!grid.is_free(c)) throw ValidationError("path crosses an occupied cell");
  }
  std::vector<Corridor> cs;
  const size_t body_begin = path.prefix;
  const size_t body_end = cells.size() - path.suffix;  // exclusive
  auto block = [&](size_t a, size_t b) {
    Cell lo = cells[a], hi = cells[a];
    for (size_t i = a; i <= b; ++i) {
      lo = {std::min(lo.row, cells[i].row), std::min(lo.col, cells[i].col)};
      hi = {std::max(hi.row, cells[i].row), std::max(hi.col, cells[i].col)};
    }
    return make_corridor(grid, lo, hi);
  };
  if (path.prefix > 0) cs.push_back(block(0, body_begin));
  {
    const std::vector<Cell> body(cells.begin() + static_cast<long>(body_begin),
                                 cells.begin() + static_cast<long>(body_end));
    for (auto [lo, hi] : detail::split_runs(body)) {
      cs.push_back(make_corridor(grid, lo, hi));
    }
  }
  if (path.suffix > 0) cs.push_back(block(body_end - 1, cells.size() - 1));

  int passes = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& c : cs) changed |= detail::grow_once(grid, c);
    while (detail::prune_once(cs)) changed = true;
    ++passes;
  }
  if (cs.empty()) throw DegenerateSequence("pruning emptied the sequence");
  if (stats) stats->passes = passes;
  return {std::move(cs)};
}

// Cell path, endpoint extension and corridor construction for a scenario.
inline CorridorSequence build_corridor_sequence(const Scenario& s) {
  const auto path = shortest_cell_path(s.grid, s.grid.cell_at(s.p0),
                                       s.grid.cell_at(s.pn));
  return build_corridors(extend_path(path, s), s.grid);
}

// Returns a description of the first violated sequence invariant, or nothing.
inline std::optional<std::string> check_sequence(const CorridorSequence& seq,
                                                 const Scenario& s) {
  const auto& cs = seq.corridors;
  if (cs.empty()) return "empty sequence";
  for (size_t i = 0; i < cs.size(); ++i) {
    if (!detail::range_free(s.grid, cs[i].lo, cs[i].hi)) {
      return "corridor " + std::to_string(i) + " covers an occupied cell";
    }
    if (cs[i].box.width() < s.vehicle.width - 1e-12 ||
        cs[i].box.height() < s.vehicle.length - 1e-12) {
      return "corridor " + std::to_string(i) + " narrower than the vehicle";
    }
    for (size_t j = i + 2; j < cs.size(); ++j) {
      if (overlaps_with_area(cs[i].box, cs[j].box)) {
        return "corridors " + std::to_string(i) + " and " + std::to_string(j) +
               " overlap";
      }
    }
  }
  for (size_t k = 1; k < cs.size(); ++k) {
    if (seq.shrunk_overlap(k, s.vehicle).empty()) {
      return "overlap " + std::to_string(k) + " cannot hold the vehicle";
    }
  }
  if (!cs.front().box.contains(footprint(s.p0, s.vehicle), 1e-12)) {
    return "start footprint outside the first corridor";
  }
  if (!cs.back().box.contains(footprint(s.pn, s.vehicle), 1e-12)) {
    return "goal footprint outside the last corridor";
  }
  return std::nullopt;
}

inline nlohmann::json corridors_to_json(const CorridorSequence& seq) {
  auto out = nlohmann::json::array();
  for (const auto& c : seq.corridors) {
    out.push_back({{"x_min", c.box.lo.x},
                   {"x_max", c.box.hi.x},
                   {"y_min", c.box.lo.y},
                   {"y_max", c.box.hi.y},
                   {"cells", {c.lo.row, c.lo.col, c.hi.row, c.hi.col}}});
  }
  return out;
}

}  // namespace pmp
