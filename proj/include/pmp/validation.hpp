#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmp/corridors.hpp"
#include "pmp/errors.hpp"
#include "pmp/kinematics.hpp"
#include "pmp/world.hpp"

namespace pmp {

// Times at which a trajectory is checked: uniform samples at `rate_hz`, the
// final time, and optionally every interior velocity zero-crossing, which
// are the only places a piecewise-parabolic path can peak between samples.
inline std::vector<double> check_times(const Trajectory& traj, double rate_hz,
                                       bool with_extrema = true) {
  std::vector<double> times;
  for (const auto& s : sample(traj, rate_hz)) times.push_back(s.t);
  if (with_extrema) {
    for (const auto& piece : traj.pieces) {
      for (const auto& axis : piece.prim.axis) {
        for (const auto& e : extreme_points(axis)) {
          const double t = piece.t_start + e.t;
          if (t >= 0.0 && t <= traj.t_move) times.push_back(t);
        }
      }
    }
    std::sort(times.begin(), times.end());
  }
  return times;
}

struct FeasibilityReport {
  size_t points = 0;
  size_t corridor_violations = 0;
  size_t obstacle_violations = 0;
  size_t speed_violations = 0;
  size_t accel_violations = 0;
  double max_speed = 0.0;  // largest per-axis |v|
  double max_accel = 0.0;  // largest per-axis |a|

  bool ok() const {
    return corridor_violations == 0 && obstacle_violations == 0 &&
           speed_violations == 0 && accel_violations == 0;
  }
};

// Checks obstacle clearance, vehicle limits and, when a corridor sequence is
// given, membership in the union of admissible corridor boxes.
inline FeasibilityReport check_trajectory(const Trajectory& traj, const Scenario& s,
                                          const CorridorSequence* seq,
                                          double rate_hz = 100.0, double tol = 1e-6,
                                          bool with_extrema = true) {
  FeasibilityReport rep;
  for (double t : check_times(traj, rate_hz, with_extrema)) {
    const auto st = traj.at(t);
    ++rep.points;
    if (seq && !seq->inflated_union_contains(st.p, s.vehicle, tol)) {
      ++rep.corridor_violations;
    }
    if (!footprint_free(st.p, s.vehicle, s.grid)) ++rep.obstacle_violations;
    const double sp = norm_inf(st.v);
    const double ac = norm_inf(st.a);
    rep.max_speed = std::max(rep.max_speed, sp);
    rep.max_accel = std::max(rep.max_accel, ac);
    if (sp > s.vehicle.v_max + tol) ++rep.speed_violations;
    if (ac > s.vehicle.a_max + tol) ++rep.accel_violations;
  }
  return rep;
}

// Number of uniform samples outside every admissible corridor box.
inline size_t intersample_violation_count(const Trajectory& traj,
                                          const CorridorSequence& seq,
                                          const Vehicle& vehicle, double rate_hz = 100.0,
                                          double tol = 1e-6) {
  size_t count = 0;
  for (const auto& smp : sample(traj, rate_hz)) {
    if (!seq.inflated_union_contains(smp.p, vehicle, tol)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Validation of exported trajectory files.

inline std::vector<Sample> parse_samples_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<Sample> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "t,px,py,vx,vy,ax,ay") {
        throw ParseError(1, "expected header t,px,py,vx,vy,ax,ay");
      }
      continue;
    }
    std::vector<double> vals;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        size_t used = 0;
        vals.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError(line_no, "not a number: '" + field + "'");
      }
    }
    if (vals.size() != 7) {
      throw ParseError(line_no, "expected 7 fields, got " + std::to_string(vals.size()));
    }
    out.push_back({vals[0], {vals[1], vals[2]}, {vals[3], vals[4]}, {vals[5], vals[6]}});
  }
  if (out.empty()) throw ParseError(0, "trajectory has no samples");
  return out;
}

// Verdict of one check over all samples. `first_row` is the 1-based CSV line
// of the first failing sample (the header is line 1), 0 when none failed.
struct SampleCheck {
  std::string name;
  size_t failures = 0;
  size_t first_row = 0;
  std::string first_detail;
  bool passed() const { return failures == 0; }
};

struct SampleValidation {
  std::vector<SampleCheck> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const SampleCheck& c) { return c.passed(); });
  }
  const SampleCheck& check(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return c;
    }
    throw std::out_of_range("no check named " + name);
  }
};

// Collision, bound and continuity checks on exported samples. Continuity
// asks that consecutive positions and velocities be reachable from each
// other under the acceleration limit, i.e. consistent with finite v and a.
inline SampleValidation validate_samples(const std::vector<Sample>& samples,
                                         const OccupancyGrid& grid, const Vehicle& veh,
                                         double tol = 1e-6) {
  SampleValidation out;
  for (const char* name :
       {"collision", "velocity bound", "acceleration bound", "time", "continuity"}) {
    out.checks.push_back(SampleCheck{name, 0, 0, {}});
  }
  auto fail = [&](size_t check, size_t i, const std::string& detail) {
    SampleCheck& c = out.checks[check];
    if (c.failures++ == 0) {
      c.first_row = i + 2;
      c.first_detail = "t=" + format_double(samples[i].t) + ": " + detail;
    }
  };
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    bool free = false;
    try {
      free = footprint_free(s.p, veh, grid);
    } catch (const OutOfBounds&) {
      free = false;
    }
    if (!free) fail(0, i, "footprint overlaps an occupied cell or leaves the map");
    if (norm_inf(s.v) > veh.v_max + tol) {
      fail(1, i, "|v|inf = " + format_double(norm_inf(s.v)) + " > " + format_double(veh.v_max));
    }
    if (norm_inf(s.a) > veh.a_max + tol) {
      fail(2, i, "|a|inf = " + format_double(norm_inf(s.a)) + " > " + format_double(veh.a_max));
    }
    if (i == 0) continue;
    const auto& prev = samples[i - 1];
    const double dt = s.t - prev.t;
    if (!(dt > 0.0)) {
      fail(3, i, "time does not increase");
      continue;
    }
    for (int d = 0; d < 2; ++d) {
      const double dv = std::abs(s.v[d] - prev.v[d]);
      const double dp = std::abs(s.p[d] - prev.p[d] - 0.5 * (s.v[d] + prev.v[d]) * dt);
      if (dv > veh.a_max * dt + tol) {
        fail(4, i, std::string("velocity jump on ") + "xy"[d]);
        break;
      }
      if (dp > 0.25 * veh.a_max * dt * dt + tol) {
        fail(4, i, std::string("position jump on ") + "xy"[d]);
        break;
      }
    }
  }
  return out;
}

}  // namespace pmp
