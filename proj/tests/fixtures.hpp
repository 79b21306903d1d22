#pragma once

#include <filesystem>
#include <string>

#include "pmp/pmp.hpp"

#ifndef PMP_DATA_DIR
#define PMP_DATA_DIR "data"
#endif

namespace fixtures {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(PMP_DATA_DIR) / name;
}

inline pmp::Scenario load(const std::string& name) {
  return pmp::load_scenario_file(data_path(name));
}

// Three 1 m cells per side, free bottom row and right column. The corridors
// are [0,3]x[0,1] and [2,3]x[0,3].
inline pmp::Scenario l_turn() {
  pmp::Scenario s;
  s.grid = pmp::load_map("cells 3 3 1\n##.\n##.\n...\n");
  s.vehicle = {0.5, 0.5, 1.0, 2.0};
  s.p0 = {0.5, 0.5};
  s.pn = {2.5, 2.75};
  return s;
}

// The L-turn reflected about x = 1.5.
inline pmp::Scenario l_turn_mirrored() {
  pmp::Scenario s;
  s.grid = pmp::load_map("cells 3 3 1\n.##\n.##\n...\n");
  s.vehicle = {0.5, 0.5, 1.0, 2.0};
  s.p0 = {2.5, 0.5};
  s.pn = {0.5, 2.75};
  return s;
}

inline pmp::Scenario empty_map(pmp::Vec2 p0, pmp::Vec2 pn, double v_max = 1.0,
                               double a_max = 2.0) {
  pmp::Scenario s;
  s.grid = pmp::OccupancyGrid(6, 8, 0.5);
  s.vehicle = {0.25, 0.25, v_max, a_max};
  s.p0 = p0;
  s.pn = pn;
  return s;
}

// Rest-to-rest minimum time written out independently of the library.
inline double rest_to_rest_time(double d, double v_max, double a_max) {
  d = std::abs(d);
  if (d <= v_max * v_max / a_max) return 2.0 * std::sqrt(d / a_max);
  return d / v_max + v_max / a_max;
}

}  // namespace fixtures
