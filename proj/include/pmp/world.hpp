#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pmp/errors.hpp"
#include "pmp/geometry.hpp"

namespace pmp {

struct Vehicle {
  double width = 0.0;   // W, along x
  double length = 0.0;  // L, along y
  double v_max = 0.0;
  double a_max = 0.0;

  Vec2 half_extent() const { return {0.5 * width, 0.5 * length}; }

  void validate() const {
    if (!(width > 0.0 && length > 0.0 && v_max > 0.0 && a_max > 0.0)) {
      throw ValidationError("vehicle W, L, v_max and a_max must be positive");
    }
  }
};

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Square-cell occupancy grid. x grows with the column index, y with the row
// index; `origin` is the world position of the outer corner of cell (0, 0).
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int rows, int cols, double cell_size, Vec2 origin = {})
      : rows_(rows),
        cols_(cols),
        cell_size_(cell_size),
        origin_(origin),
        occupied_(static_cast<size_t>(rows) * cols, 0) {
    if (rows <= 0 || cols <= 0) {
      throw ValidationError("grid dimensions must be positive");
    }
    if (!(cell_size > 0.0)) throw ValidationError("cell size must be positive");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double cell_size() const { return cell_size_; }
  Vec2 origin() const { return origin_; }

  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
  }
  bool occupied(Cell c) const { return occupied_[index(c)] != 0; }
  bool is_free(Cell c) const { return in_bounds(c) && !occupied(c); }
  void set_occupied(Cell c, bool value = true) {
    occupied_[index(c)] = value ? 1 : 0;
  }
  size_t occupied_count() const {
    size_t n = 0;
    for (auto o : occupied_) n += o;
    return n;
  }

  Box extent() const {
    return {origin_, origin_ + Vec2{cols_ * cell_size_, rows_ * cell_size_}};
  }
  Box cell_box(Cell c) const {
    const Vec2 lo = origin_ + Vec2{c.col * cell_size_, c.row * cell_size_};
    return {lo, lo + Vec2{cell_size_, cell_size_}};
  }
  // Box spanning the inclusive cell range [a, b].
  Box cell_range_box(Cell a, Cell b) const {
    return {cell_box(a).lo, cell_box(b).hi};
  }
  // Cell whose half-open square [lo, hi) contains p, clamped to the grid.
  Cell cell_at(Vec2 p) const {
    const Vec2 q = p - origin_;
    int col = static_cast<int>(std::floor(q.x / cell_size_));
    int row = static_cast<int>(std::floor(q.y / cell_size_));
    return {std::clamp(row, 0, rows_ - 1), std::clamp(col, 0, cols_ - 1)};
  }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  size_t index(Cell c) const {
    return static_cast<size_t>(c.row) * cols_ + c.col;
  }

  int rows_ = 0;
  int cols_ = 0;
  double cell_size_ = 1.0;
  Vec2 origin_;
  std::vector<uint8_t> occupied_;
};

struct Scenario {
  OccupancyGrid grid;
  Vehicle vehicle;
  Vec2 p0;
  Vec2 pn;
  Vec2 v0;  // initial velocity; the terminal velocity is always zero
};

// Closed footprint box of the vehicle centered at p.
inline Box footprint(Vec2 p, const Vehicle& vehicle) {
  const Vec2 h = vehicle.half_extent();
  return {p - h, p + h};
}

namespace detail {
constexpr double kCellTol = 1e-9;

// Index range of unit intervals [k, k+1) overlapping (lo, hi) with positive
// length, in cell units.
inline std::pair<int, int> overlapping_range(double lo, double hi) {
  if (hi - lo <= kCellTol) {
    const int k = static_cast<int>(std::floor(lo + kCellTol));
    return {k, k};
  }
  return {static_cast<int>(std::floor(lo + kCellTol)),
          static_cast<int>(std::ceil(hi - kCellTol)) - 1};
}
}  // namespace detail

// Cells whose interior shares positive area with the footprint interior,
// sorted by (row, col).
inline std::vector<Cell> occupied_cells(Vec2 p, const Vehicle& vehicle,
                                        const OccupancyGrid& grid) {
  const Box f = footprint(p, vehicle);
  if (!grid.extent().contains(f, detail::kCellTol)) {
    throw OutOfBounds("footprint leaves the grid extent");
  }
  const Vec2 o = grid.origin();
  const double cs = grid.cell_size();
  auto [c0, c1] = detail::overlapping_range((f.lo.x - o.x) / cs,
                                            (f.hi.x - o.x) / cs);
  auto [r0, r1] = detail::overlapping_range((f.lo.y - o.y) / cs,
                                            (f.hi.y - o.y) / cs);
  c0 = std::max(c0, 0);
  r0 = std::max(r0, 0);
  c1 = std::min(c1, grid.cols() - 1);
  r1 = std::min(r1, grid.rows() - 1);
  std::vector<Cell> cells;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) cells.push_back({r, c});
  }
  return cells;
}

// True when the footprint at p lies inside the grid and touches no occupied
// cell with positive area.
inline bool footprint_free(Vec2 p, const Vehicle& vehicle,
                           const OccupancyGrid& grid) {
  if (!grid.extent().contains(footprint(p, vehicle), detail::kCellTol)) {
    return false;
  }
  for (const Cell& c : occupied_cells(p, vehicle, grid)) {
    if (grid.occupied(c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Map text format:
//   cells <rows> <cols> <cell_size_m>
//   <row rows-1>
//   ...
//   <row 0>
// using '.' for free and '#' for occupied cells.

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline OccupancyGrid load_map(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string current;
    for (char ch : text) {
      if (ch == '\n') {
        lines.push_back(current);
        current.clear();
      } else if (ch != '\r') {
        current.push_back(ch);
      }
    }
    if (!current.empty()) lines.push_back(current);
  }
  auto rtrim = [](std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    return s;
  };
  while (!lines.empty() && rtrim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "empty map");

  std::istringstream header(lines[0]);
  std::string keyword;
  int rows = 0;
  int cols = 0;
  double cell_size = 0.0;
  if (!(header >> keyword) || keyword != "cells") {
    throw ParseError(1, "expected header 'cells <rows> <cols> <cell_size>'");
  }
  if (!(header >> rows >> cols >> cell_size)) {
    throw ParseError(1, "malformed header numbers");
  }
  std::string extra;
  if (header >> extra) throw ParseError(1, "trailing tokens in header");
  if (rows <= 0 || cols <= 0) throw ParseError(1, "rows and cols must be > 0");
  if (!(cell_size > 0.0)) throw ParseError(1, "cell size must be > 0");
  if (static_cast<int>(lines.size()) - 1 != rows) {
    throw ParseError(static_cast<int>(lines.size()),
                     "expected " + std::to_string(rows) + " grid rows, got " +
                         std::to_string(lines.size() - 1));
  }
  OccupancyGrid grid(rows, cols, cell_size);
  for (int i = 0; i < rows; ++i) {
    const int line_no = i + 2;
    const std::string row_text = rtrim(lines[i + 1]);
    if (static_cast<int>(row_text.size()) != cols) {
      throw ParseError(line_no, "expected " + std::to_string(cols) +
                                    " cells, got " +
                                    std::to_string(row_text.size()));
    }
    const int row = rows - 1 - i;
    for (int col = 0; col < cols; ++col) {
      const char ch = row_text[col];
      if (ch == '#') {
        grid.set_occupied({row, col});
      } else if (ch != '.') {
        throw ParseError(line_no, std::string("unexpected character '") + ch +
                                      "' at column " + std::to_string(col + 1));
      }
    }
  }
  return grid;
}

inline std::string serialize_map(const OccupancyGrid& grid) {
  std::string out = "cells " + std::to_string(grid.rows()) + " " +
                    std::to_string(grid.cols()) + " " +
                    format_double(grid.cell_size()) + "\n";
  for (int row = grid.rows() - 1; row >= 0; --row) {
    for (int col = 0; col < grid.cols(); ++col) {
      out.push_back(grid.occupied({row, col}) ? '#' : '.');
    }
    out.push_back('\n');
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

// Checks the scenario invariants that do not depend on the planner.
inline void validate_scenario(const Scenario& s) {
  s.vehicle.validate();
  auto check_endpoint = [&](Vec2 p, const char* what) {
    if (!s.grid.extent().contains(footprint(p, s.vehicle), detail::kCellTol)) {
      throw ValidationError(std::string(what) +
                            " footprint leaves the grid extent");
    }
    if (!footprint_free(p, s.vehicle, s.grid)) {
      throw ValidationError(std::string(what) +
                            " footprint overlaps an occupied cell");
    }
  };
  check_endpoint(s.p0, "start");
  check_endpoint(s.pn, "goal");
  if (norm_inf(s.v0) > s.vehicle.v_max + 1e-12) {
    throw ValidationError("initial velocity exceeds v_max");
  }
}

namespace detail {
inline Vec2 json_vec2(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ParseError(0, std::string(what) + " must be an array [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}
}  // namespace detail

// Parses a scenario document. A "map" string starting with "cells" is taken as
// inline map text, otherwise as a path relative to `base_dir`.
inline Scenario load_scenario(std::string_view text,
                              const std::filesystem::path& base_dir = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  Scenario s;
  try {
    const std::string map = doc.at("map").get<std::string>();
    if (map.rfind("cells", 0) == 0) {
      s.grid = load_map(map);
    } else {
      s.grid = load_map(read_text_file(base_dir / map));
    }
    const auto& v = doc.at("vehicle");
    s.vehicle = {v.at("W").get<double>(), v.at("L").get<double>(),
                 v.at("v_max").get<double>(), v.at("a_max").get<double>()};
    const auto& start = doc.at("start");
    s.p0 = detail::json_vec2(start.at("p"), "start.p");
    s.v0 = start.contains("v") ? detail::json_vec2(start.at("v"), "start.v")
                               : Vec2{};
    s.pn = detail::json_vec2(doc.at("goal").at("p"), "goal.p");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("scenario: ") + e.what());
  }
  validate_scenario(s);
  return s;
}

inline Scenario load_scenario_file(const std::filesystem::path& path) {
  return load_scenario(read_text_file(path), path.parent_path());
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  return {{"map", serialize_map(s.grid)},
          {"vehicle",
           {{"W", s.vehicle.width},
            {"L", s.vehicle.length},
            {"v_max", s.vehicle.v_max},
            {"a_max", s.vehicle.a_max}}},
          {"start", {{"p", {s.p0.x, s.p0.y}}, {"v", {s.v0.x, s.v0.y}}}},
          {"goal", {{"p", {s.pn.x, s.pn.y}}}}};
}

}  // namespace pmp
