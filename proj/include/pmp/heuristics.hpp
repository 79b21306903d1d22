#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "json.hpp"
#include "pmp/corridors.hpp"
#include "pmp/errors.hpp"
#include "pmp/geometry.hpp"
#include "pmp/kinematics.hpp"
#include "pmp/world.hpp"

namespace pmp {

// Waypoints and acceleration signs for a chain of n primitives. Primitive k
// runs from waypoints[k] to waypoints[k + 1] inside corridor k.
struct PrimitiveSelection {
  std::vector<Vec2> waypoints;
  std::vector<Vec2> signs;          // per waypoint, components in {-1, +1}
  std::vector<bool> movable;        // only interior waypoints can be true
  std::vector<Box> delta_bounds;    // offset box, meaningful when movable
  int free_axis_start = 0;          // axis whose start sign is optimized
  int free_axis_end = 0;            // axis whose end sign is optimized

  size_t primitives() const { return waypoints.size() - 1; }
  size_t movable_count() const {
    size_t n = 0;
    for (bool m : movable) n += m ? 1 : 0;
    return n;
  }
};

inline constexpr double kWaypointMu = 20.0;

// Corners of a box in the order (-x-y, +x-y, -x+y, +x+y), duplicates dropped.
inline std::vector<Vec2> box_corners(const Box& b) {
  std::vector<Vec2> out;
  for (Vec2 q : {b.lo, Vec2{b.hi.x, b.lo.y}, Vec2{b.lo.x, b.hi.y}, b.hi}) {
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  }
  return out;
}

// Candidate waypoints for the overlap between corridors k-1 and k. Corners
// lying strictly inside the admissible box of either adjacent corridor are
// dropped; when that removes everything, all corners are kept.
inline std::vector<Vec2> candidate_waypoints(const CorridorSequence& seq, size_t k,
                                             const Vehicle& vehicle) {
  const Box shrunk = seq.shrunk_overlap(k, vehicle);
  if (shrunk.empty()) {
    throw EmptyCandidates("overlap " + std::to_string(k) +
                          " is smaller than the vehicle footprint");
  }
  const auto corners = box_corners(shrunk);
  constexpr double kTol = 1e-9;
  auto strictly_inside = [&](Vec2 q, const Box& b) {
    return q.x > b.lo.x + kTol && q.x < b.hi.x - kTol && q.y > b.lo.y + kTol &&
           q.y < b.hi.y - kTol;
  };
  std::vector<Vec2> kept;
  for (Vec2 q : corners) {
    if (strictly_inside(q, seq[k - 1].inflated(vehicle)) ||
        strictly_inside(q, seq[k].inflated(vehicle))) {
      continue;
    }
    kept.push_back(q);
  }
  return kept.empty() ? corners : kept;
}

// Picks, for each overlap in order, the candidate nearest to a point pushed far
// towards the inside of the turn.
inline std::vector<Vec2> select_waypoints(const CorridorSequence& seq,
                                          const Scenario& s,
                                          double mu = kWaypointMu) {
  std::vector<Vec2> out;
  Vec2 prev = s.p0;
  const size_t n = seq.size();
  for (size_t k = 1; k < n; ++k) {
    const Box overlap = seq.overlap(k);
    const Vec2 c = overlap.center();
    const Vec2 target = k + 1 < n ? seq.overlap(k + 1).center() : s.pn;
    const auto cands = candidate_waypoints(seq, k, s.vehicle);

    const Vec2 d = target - prev;
    const double len = norm(d);
    Vec2 inside = c;
    bool collinear = len < 1e-12;
    if (!collinear) {
      const Vec2 perp{-d.y / len, d.x / len};
      const double offset = dot(prev - c, perp);  // signed distance to the line
      collinear = std::abs(offset) < 1e-9;
      if (!collinear) {
        inside = c + mu * sign_nonzero(offset) * perp;
        if (overlap.contains(inside)) {
          throw ValidationError("waypoint pull point falls inside the overlap");
        }
      }
    }
    size_t best = 0;
    for (size_t i = 1; i < cands.size(); ++i) {
      if (norm(cands[i] - inside) < norm(cands[best] - inside)) best = i;
    }
    out.push_back(cands[best]);
    prev = cands[best];
  }
  return out;
}

inline Vec2 sign_vec(Vec2 v) { return {sign_nonzero(v.x), sign_nonzero(v.y)}; }

// Acceleration signs at every waypoint given the full waypoint list p0..pn.
inline std::vector<Vec2> select_signs(const std::vector<Vec2>& waypoints,
                                      const CorridorSequence& seq) {
  const size_t n = waypoints.size() - 1;
  std::vector<Vec2> out(n + 1);
  out[0] = sign_vec(waypoints[1] - waypoints[0]);
  out[n] = sign_vec(waypoints[n - 1] - waypoints[n]);
  for (size_t k = 1; k < n; ++k) {
    out[k] = sign_vec(waypoints[k] - seq.overlap(k).center());
  }
  return out;
}

// The axis that reaches its target first in an unconstrained per-axis
// time-optimal motion; ties go to x.
inline int faster_axis(Vec2 from, Vec2 to, Vec2 v_from, const Vehicle& veh) {
  const double tx = min_time_1d(from.x, to.x, v_from.x, veh.v_max, veh.a_max).duration();
  const double ty = min_time_1d(from.y, to.y, v_from.y, veh.v_max, veh.a_max).duration();
  return ty < tx ? 1 : 0;
}

// True when the footprint swept along a -> b keeps all four corners inside
// the corridor union at every sample.
inline bool straight_segment_clear(Vec2 a, Vec2 b, const CorridorSequence& seq,
                                   const Vehicle& vehicle, int samples = 200) {
  for (int j = 0; j < samples; ++j) {
    const double t = samples == 1 ? 0.0 : static_cast<double>(j) / (samples - 1);
    const Box f = footprint(a + t * (b - a), vehicle);
    for (Vec2 q : box_corners(f)) {
      if (!seq.union_contains(q, 1e-12)) return false;
    }
  }
  return true;
}

// Releases interior waypoints that a straight line between their neighbours
// can skip: the sign flips and the waypoint may slide within its overlap.
inline PrimitiveSelection straight_line_modification(PrimitiveSelection sel,
                                                     const CorridorSequence& seq,
                                                     const Vehicle& vehicle) {
  const size_t n = sel.primitives();
  for (size_t k = 1; k < n; ++k) {
    if (!straight_segment_clear(sel.waypoints[k - 1], sel.waypoints[k + 1], seq,
                                vehicle)) {
      continue;
    }
    sel.signs[k] = -1.0 * sel.signs[k];
    sel.movable[k] = true;
    const Box o = seq.shrunk_overlap(k, vehicle);
    sel.delta_bounds[k] = {o.lo - sel.waypoints[k], o.hi - sel.waypoints[k]};
  }
  return sel;
}

// Full heuristic selection: waypoints, signs, free axes and the straight-line
// modification.
inline PrimitiveSelection select_primitives(const CorridorSequence& seq,
                                            const Scenario& s,
                                            double mu = kWaypointMu) {
  PrimitiveSelection sel;
  sel.waypoints.push_back(s.p0);
  for (Vec2 p : select_waypoints(seq, s, mu)) sel.waypoints.push_back(p);
  sel.waypoints.push_back(s.pn);
  const size_t n = sel.primitives();
  sel.signs = select_signs(sel.waypoints, seq);
  sel.movable.assign(n + 1, false);
  sel.delta_bounds.assign(n + 1, Box{});
  sel.free_axis_start = faster_axis(s.p0, sel.waypoints[1], s.v0, s.vehicle);
  sel.free_axis_end = faster_axis(sel.waypoints[n - 1], s.pn, {0.0, 0.0}, s.vehicle);
  return straight_line_modification(std::move(sel), seq, s.vehicle);
}

inline nlohmann::json selection_to_json(const PrimitiveSelection& sel) {
  auto wps = nlohmann::json::array();
  for (size_t k = 0; k < sel.waypoints.size(); ++k) {
    nlohmann::json w = {{"p", {sel.waypoints[k].x, sel.waypoints[k].y}},
                        {"alpha", {sel.signs[k].x, sel.signs[k].y}},
                        {"movable", static_cast<bool>(sel.movable[k])}};
    if (sel.movable[k]) {
      const Box& b = sel.delta_bounds[k];
      w["delta_lo"] = {b.lo.x, b.lo.y};
      w["delta_hi"] = {b.hi.x, b.hi.y};
    }
    wps.push_back(w);
  }
  const char* axes[] = {"x", "y"};
  return {{"waypoints", wps},
          {"free_axis_start", axes[sel.free_axis_start]},
          {"free_axis_end", axes[sel.free_axis_end]}};
}

}  // namespace pmp
