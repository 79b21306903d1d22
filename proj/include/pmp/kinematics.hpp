#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmp/geometry.hpp"
#include "pmp/world.hpp"

namespace pmp {

// One-axis bang-coast-bang profile: acceleration alpha_start * a_max for
// tau[0], zero for tau[1], alpha_end * a_max for tau[2].
struct Primitive1D {
  double alpha_start = 1.0;
  double alpha_end = -1.0;
  double p = 0.0;  // position at the start
  double v = 0.0;  // velocity at the start
  std::array<double, 3> tau{0.0, 0.0, 0.0};
  double a_max = 1.0;

  double duration() const { return tau[0] + tau[1] + tau[2]; }

  // Velocity after the first phase, i.e. the coasting velocity.
  double coast_velocity() const { return v + a_max * alpha_start * tau[0]; }

  double end_velocity() const {
    return v + a_max * (alpha_start * tau[0] + alpha_end * tau[2]);
  }
  double end_position() const {
    const double a0 = a_max * alpha_start;
    return p + v * duration() + 0.5 * a0 * tau[0] * tau[0] +
           a0 * tau[0] * (tau[1] + tau[2]) +
           0.5 * a_max * alpha_end * tau[2] * tau[2];
  }

  struct State {
    double p;
    double v;
    double a;
  };

  // Exact state at local time t. Outside [0, T] the motion is extended with
  // zero acceleration.
  State at(double t) const {
    t = std::max(t, 0.0);
    const double a0 = a_max * alpha_start;
    const double a2 = a_max * alpha_end;
    if (t < tau[0]) return {p + v * t + 0.5 * a0 * t * t, v + a0 * t, a0};
    const double p1 = p + v * tau[0] + 0.5 * a0 * tau[0] * tau[0];
    const double v1 = v + a0 * tau[0];
    const double tc = t - tau[0];
    if (tc < tau[1]) return {p1 + v1 * tc, v1, 0.0};
    const double p2 = p1 + v1 * tau[1];
    const double t2 = tc - tau[1];
    if (t2 < tau[2] || (t2 == tau[2] && tau[2] > 0.0)) return {p2 + v1 * t2 + 0.5 * a2 * t2 * t2, v1 + a2 * t2, a2};
    const double p3 = p2 + v1 * tau[2] + 0.5 * a2 * tau[2] * tau[2];
    const double v3 = v1 + a2 * tau[2];
    return {p3 + v3 * (t2 - tau[2]), v3, 0.0};
  }
};

struct Primitive2D {
  std::array<Primitive1D, 2> axis;

  // x-axis duration; both axes agree after optimization.
  double duration() const { return axis[0].duration(); }
  Vec2 start_position() const { return {axis[0].p, axis[1].p}; }
  Vec2 start_velocity() const { return {axis[0].v, axis[1].v}; }
};

struct EndState {
  Vec2 p;
  Vec2 v;
};

// Closed-form integration of both axes to their own end time.
inline EndState integrate_primitive(const Primitive2D& prim) {
  return {{prim.axis[0].end_position(), prim.axis[1].end_position()},
          {prim.axis[0].end_velocity(), prim.axis[1].end_velocity()}};
}

struct TrajectoryState {
  Vec2 p;
  Vec2 v;
  Vec2 a;
};

struct TrajectoryPiece {
  double t_start = 0.0;
  Primitive2D prim;
};

// Piecewise-analytic trajectory. Pieces are ordered by start time and the
// last piece ends at t_move.
struct Trajectory {
  std::vector<TrajectoryPiece> pieces;
  double t_move = 0.0;

  TrajectoryState at(double t) const {
    if (pieces.empty()) return {};
    auto it = std::upper_bound(
        pieces.begin(), pieces.end(), t,
        [](double value, const TrajectoryPiece& piece) {
          return value < piece.t_start;
        });
    const auto& piece = it == pieces.begin() ? pieces.front() : *std::prev(it);
    const double local = t - piece.t_start;
    const auto x = piece.prim.axis[0].at(local);
    const auto y = piece.prim.axis[1].at(local);
    return {{x.p, y.p}, {x.v, y.v}, {x.a, y.a}};
  }
};

// ---------------------------------------------------------------------------
// Time-optimal rest-to-rest style motion on one axis.

namespace detail {

// Profile that accelerates towards `s`, optionally coasts at the speed limit,
// then brakes to rest at the target. Empty when the family cannot reach it.
inline std::optional<Primitive1D> bang_coast_bang_family(double s, double p0,
                                                         double pf, double v0,
                                                         double v_max,
                                                         double a_max) {
  const double dist = s * (pf - p0);
  const double w0 = s * v0;
  const double peak_sq = a_max * dist + 0.5 * w0 * w0;
  if (peak_sq < 0.0) return std::nullopt;
  double peak = std::sqrt(peak_sq);
  if (peak < w0) {
    // Rounding at the exact stopping distance.
    if (w0 - peak > 1e-12 * std::max(1.0, w0)) return std::nullopt;
    peak = w0;
  }
  double coast = 0.0;
  if (peak > v_max) {
    peak = v_max;
    const double ramp = (v_max * v_max - w0 * w0) / (2.0 * a_max) +
                        v_max * v_max / (2.0 * a_max);
    coast = std::max(0.0, (dist - ramp) / v_max);
  }
  Primitive1D out;
  out.alpha_start = s;
  out.alpha_end = -s;
  out.p = p0;
  out.v = v0;
  out.a_max = a_max;
  out.tau = {(peak - w0) / a_max, coast, peak / a_max};
  return out;
}

}  // namespace detail

// Minimum-time motion from (p0, v0) to (pf, 0) with |v| <= v_max and
// |a| <= a_max. Requires |v0| <= v_max.
inline Primitive1D min_time_1d(double p0, double pf, double v0, double v_max,
                               double a_max) {
  if (pf == p0 && v0 == 0.0) {
    Primitive1D rest;
    rest.p = p0;
    rest.a_max = a_max;
    return rest;
  }
  double s = 0.0;
  if (pf != p0) {
    s = sign_nonzero(pf - p0);
  } else {
    s = -sign_nonzero(v0);
  }
  if (auto prof = detail::bang_coast_bang_family(s, p0, pf, v0, v_max, a_max)) {
    return *prof;
  }
  return *detail::bang_coast_bang_family(-s, p0, pf, v0, v_max, a_max);
}

// Splits a profile at local time t into a prefix on [0, t] and a suffix on
// [t, T], both still bang-coast-bang profiles.
inline std::pair<Primitive1D, Primitive1D> split_primitive(
    const Primitive1D& prim, double t) {
  Primitive1D head = prim;
  Primitive1D tail = prim;
  double remaining = std::clamp(t, 0.0, prim.duration());
  for (int i = 0; i < 3; ++i) {
    const double used = std::min(prim.tau[i], remaining);
    head.tau[i] = used;
    tail.tau[i] = prim.tau[i] - used;
    remaining -= used;
  }
  const auto s = prim.at(t);
  tail.p = s.p;
  tail.v = s.v;
  return {head, tail};
}

// Per-axis time-optimal motion ignoring obstacles. The faster axis rests at
// its target until the slower one arrives.
inline Trajectory analytic_plan_2d(const Scenario& s) {
  const auto& veh = s.vehicle;
  std::array<Primitive1D, 2> prims{
      min_time_1d(s.p0.x, s.pn.x, s.v0.x, veh.v_max, veh.a_max),
      min_time_1d(s.p0.y, s.pn.y, s.v0.y, veh.v_max, veh.a_max)};
  const int slow = prims[0].duration() >= prims[1].duration() ? 0 : 1;
  const int fast = 1 - slow;
  const double t_fast = prims[fast].duration();
  const double t_slow = prims[slow].duration();

  Trajectory traj;
  traj.t_move = t_slow;
  auto [slow_head, slow_tail] = split_primitive(prims[slow], t_fast);
  if (t_fast > 0.0) {
    Primitive2D first;
    first.axis[fast] = prims[fast];
    first.axis[slow] = slow_head;
    traj.pieces.push_back({0.0, first});
  }
  if (t_slow > t_fast || traj.pieces.empty()) {
    Primitive1D rest;
    rest.p = s.pn[fast];
    rest.v = 0.0;
    rest.a_max = veh.a_max;
    rest.tau = {0.0, t_slow - t_fast, 0.0};
    Primitive2D second;
    second.axis[fast] = rest;
    second.axis[slow] = slow_tail;
    traj.pieces.push_back({t_fast, second});
  }
  return traj;
}

// Interior velocity zero-crossing of a parabolic phase, or a coast phase at
// zero velocity.
struct ExtremePoint {
  double t = 0.0;  // local time
  double p = 0.0;
  int phase = 0;   // 0 = first acceleration, 1 = coast, 2 = last acceleration
  bool stationary = false;
};

inline std::vector<ExtremePoint> extreme_points(const Primitive1D& prim) {
  std::vector<ExtremePoint> out;
  const double a0 = prim.a_max * prim.alpha_start;
  const double a2 = prim.a_max * prim.alpha_end;
  const double v1 = prim.coast_velocity();
  const double v3 = prim.end_velocity();
  if (prim.tau[0] > 0.0 && prim.v * v1 < 0.0 && a0 != 0.0) {
    const double t = -prim.v / a0;
    out.push_back({t, prim.at(t).p, 0, false});
  }
  if (prim.tau[1] > 0.0 && v1 == 0.0) {
    out.push_back({prim.tau[0], prim.at(prim.tau[0]).p, 1, true});
  }
  if (prim.tau[2] > 0.0 && v1 * v3 < 0.0 && a2 != 0.0) {
    const double t = prim.tau[0] + prim.tau[1] - v1 / a2;
    out.push_back({t, prim.at(t).p, 2, false});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling and export.

struct Sample {
  double t = 0.0;
  Vec2 p;
  Vec2 v;
  Vec2 a;
};

// Samples at t = k / rate_hz plus a final sample at exactly t_move.
inline std::vector<Sample> sample(const Trajectory& traj, double rate_hz) {
  std::vector<Sample> out;
  const auto last = static_cast<long>(std::floor(traj.t_move * rate_hz + 1e-9));
  for (long k = 0; k <= last; ++k) {
    const double t = std::min(static_cast<double>(k) / rate_hz, traj.t_move);
    if (!out.empty() && t - out.back().t < 1e-12) continue;
    const auto s = traj.at(t);
    out.push_back({t, s.p, s.v, s.a});
  }
  if (out.empty() || traj.t_move - out.back().t > 1e-12) {
    const auto s = traj.at(traj.t_move);
    out.push_back({traj.t_move, s.p, s.v, s.a});
  }
  return out;
}

inline std::string samples_to_csv(const std::vector<Sample>& samples) {
  std::string out = "t,px,py,vx,vy,ax,ay\n";
  char line[256];
  for (const auto& s : samples) {
    std::snprintf(line, sizeof(line), "%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n",
                  s.t, s.p.x, s.p.y, s.v.x, s.v.y, s.a.x, s.a.y);
    out += line;
  }
  return out;
}

inline nlohmann::json trajectory_to_json(const Trajectory& traj) {
  auto pieces = nlohmann::json::array();
  for (const auto& piece : traj.pieces) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : piece.prim.axis) {
      axes.push_back({{"alpha_start", a.alpha_start},
                      {"alpha_end", a.alpha_end},
                      {"p", a.p},
                      {"v", a.v},
                      {"tau", {a.tau[0], a.tau[1], a.tau[2]}},
                      {"a_max", a.a_max}});
    }
    pieces.push_back({{"t_start", piece.t_start},
                      {"duration", piece.prim.duration()},
                      {"x", axes[0]},
                      {"y", axes[1]}});
  }
  return {{"t_move", traj.t_move}, {"pieces", pieces}};
}

}  // namespace pmp
