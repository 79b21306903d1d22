#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmp/corridors.hpp"
#include "pmp/errors.hpp"
#include "pmp/heuristics.hpp"
#include "pmp/kinematics.hpp"
#include "pmp/polynomial.hpp"
#include "pmp/solver.hpp"
#include "pmp/world.hpp"

namespace pmp::nlp {

inline constexpr double kSlackWeight = 1e3;

// Index map of the decision vector. Per primitive k: v_k (x, y) followed by
// three x-phase and three y-phase durations. Then the two free acceleration
// multipliers, their slacks and one offset pair per movable waypoint.
struct Layout {
  size_t n = 0;
  std::vector<int> delta;  // per waypoint, first index of its offset or -1

  int v(size_t k, int axis) const { return static_cast<int>(8 * k) + axis; }
  int tau(size_t k, int axis, int phase) const {
    return static_cast<int>(8 * k) + 2 + 3 * axis + phase;
  }
  int alpha_start() const { return static_cast<int>(8 * n); }
  int alpha_end() const { return static_cast<int>(8 * n) + 1; }
  int slack_start() const { return static_cast<int>(8 * n) + 2; }
  int slack_end() const { return static_cast<int>(8 * n) + 3; }
  int size() const {
    int count = static_cast<int>(8 * n) + 4;
    for (int d : delta) count += d >= 0 ? 2 : 0;
    return count;
  }
};

// Extremum positions already constrained, so repeated rounds do not duplicate.
struct RepairKey {
  size_t k;
  int axis;
  int phase;
  friend bool operator==(const RepairKey&, const RepairKey&) = default;
};

struct NlpProblem {
  Problem problem;
  Layout layout;
  PrimitiveSelection selection;
  std::vector<Box> boxes;  // admissible center box per primitive
  Vehicle vehicle;
  Vec2 v0;
  std::vector<RepairKey> repairs;
};

// ---------------------------------------------------------------------------
// Symbolic pieces of a primitive.

inline Poly start_position(const NlpProblem& P, size_t k, int axis) {
  Poly p(P.selection.waypoints[k][axis]);
  if (P.layout.delta[k] >= 0) p += Poly::var(P.layout.delta[k] + axis);
  return p;
}

inline Poly start_alpha(const NlpProblem& P, size_t k, int axis) {
  if (k == 0 && axis == P.selection.free_axis_start) {
    return Poly::var(P.layout.alpha_start());
  }
  return Poly(P.selection.signs[k][axis]);
}

inline Poly end_alpha(const NlpProblem& P, size_t k, int axis) {
  if (k + 1 == P.layout.n && axis == P.selection.free_axis_end) {
    return Poly::var(P.layout.alpha_end());
  }
  return Poly(P.selection.signs[k + 1][axis]);
}

inline bool start_alpha_free(const NlpProblem& P, size_t k, int axis) {
  return k == 0 && axis == P.selection.free_axis_start;
}
inline bool end_alpha_free(const NlpProblem& P, size_t k, int axis) {
  return k + 1 == P.layout.n && axis == P.selection.free_axis_end;
}

// Velocity entering primitive k; zero past the last primitive.
inline Poly velocity(const NlpProblem& P, size_t k, int axis) {
  return k < P.layout.n ? Poly::var(P.layout.v(k, axis)) : Poly(0.0);
}

struct PrimitiveExprs {
  Poly coast_start;  // position where coasting begins
  Poly coast_end;
  Poly end_pos;
  Poly coast_vel;
  Poly end_vel;
};

inline PrimitiveExprs primitive_exprs(const NlpProblem& P, size_t k, int axis) {
  const double a = P.vehicle.a_max;
  const Poly p = start_position(P, k, axis);
  const Poly v = velocity(P, k, axis);
  const Poly as = start_alpha(P, k, axis);
  const Poly ae = end_alpha(P, k, axis);
  const Poly t0 = Poly::var(P.layout.tau(k, axis, 0));
  const Poly t1 = Poly::var(P.layout.tau(k, axis, 1));
  const Poly t2 = Poly::var(P.layout.tau(k, axis, 2));
  PrimitiveExprs e;
  e.coast_vel = v + a * as * t0;
  e.coast_start = p + v * t0 + (0.5 * a) * as * t0 * t0;
  e.coast_end = e.coast_start + e.coast_vel * t1;
  e.end_pos = e.coast_end + e.coast_vel * t2 + (0.5 * a) * ae * t2 * t2;
  e.end_vel = e.coast_vel + a * ae * t2;
  return e;
}

inline std::vector<std::string> variable_names(const Layout& L) {
  std::vector<std::string> names(L.size());
  const char* ax = "xy";
  for (size_t k = 0; k < L.n; ++k) {
    for (int d = 0; d < 2; ++d) {
      names[L.v(k, d)] = "v" + std::to_string(k) + ax[d];
      for (int i = 0; i < 3; ++i) {
        names[L.tau(k, d, i)] =
            "tau" + std::to_string(k) + ax[d] + std::to_string(i);
      }
    }
  }
  names[L.alpha_start()] = "alpha0F";
  names[L.alpha_end()] = "alphanF";
  names[L.slack_start()] = "s0";
  names[L.slack_end()] = "sn";
  for (size_t k = 0; k < L.delta.size(); ++k) {
    if (L.delta[k] < 0) continue;
    names[L.delta[k]] = "delta" + std::to_string(k) + "x";
    names[L.delta[k] + 1] = "delta" + std::to_string(k) + "y";
  }
  return names;
}

// Builds the primitive-chain problem for a selection inside a corridor
// sequence.
inline NlpProblem assemble(const PrimitiveSelection& sel, const CorridorSequence& seq,
                           const Scenario& s) {
  const size_t n = sel.primitives();
  if (n != seq.size()) {
    throw SelectionMismatch("selection has " + std::to_string(n) +
                            " primitives for " + std::to_string(seq.size()) +
                            " corridors");
  }
  NlpProblem P;
  P.selection = sel;
  P.vehicle = s.vehicle;
  P.v0 = s.v0;
  for (const auto& c : seq.corridors) P.boxes.push_back(c.inflated(s.vehicle));

  constexpr double kBoxTol = 1e-9;
  for (size_t k = 0; k <= n; ++k) {
    const Vec2 p = sel.waypoints[k];
    const bool in_prev = k == 0 || P.boxes[k - 1].contains(p, kBoxTol);
    const bool in_next = k == n || P.boxes[k].contains(p, kBoxTol);
    if (!in_prev || !in_next) {
      throw SelectionMismatch("waypoint " + std::to_string(k) +
                              " lies outside its admissible corridor box");
    }
  }

  P.layout.n = n;
  P.layout.delta.assign(n + 1, -1);
  int next = static_cast<int>(8 * n) + 4;
  for (size_t k = 1; k < n; ++k) {
    if (sel.movable[k]) {
      P.layout.delta[k] = next;
      next += 2;
    }
  }
  const Layout& L = P.layout;
  Problem& prob = P.problem;
  prob.var_names = variable_names(L);

  const double vmax = s.vehicle.v_max;
  const char* ax = "xy";
  Poly objective = kSlackWeight * (Poly::var(L.slack_start()) * Poly::var(L.slack_start()) +
                                   Poly::var(L.slack_end()) * Poly::var(L.slack_end()));
  for (size_t k = 0; k < n; ++k) {
    for (int i = 0; i < 3; ++i) objective += Poly::var(L.tau(k, 0, i));
  }
  prob.objective = objective;

  for (int d = 0; d < 2; ++d) {
    prob.equalities.push_back(
        {Poly::var(L.v(0, d)), s.v0[d], std::string("initial velocity ") + ax[d]});
  }
  for (size_t k = 0; k < n; ++k) {
    const std::string ks = std::to_string(k);
    Poly sync;
    for (int i = 0; i < 3; ++i) {
      sync += Poly::var(L.tau(k, 0, i)) - Poly::var(L.tau(k, 1, i));
    }
    prob.equalities.push_back({sync, 0.0, "duration sync " + ks});
    for (int d = 0; d < 2; ++d) {
      const auto e = primitive_exprs(P, k, d);
      prob.equalities.push_back({e.end_pos - start_position(P, k + 1, d), 0.0,
                                 "end position " + ks + ax[d]});
      prob.equalities.push_back(
          {e.end_vel - velocity(P, k + 1, d), 0.0, "end velocity " + ks + ax[d]});
    }
  }

  for (size_t k = 0; k < n; ++k) {
    const std::string ks = std::to_string(k);
    for (int d = 0; d < 2; ++d) {
      const auto e = primitive_exprs(P, k, d);
      const std::string tag = ks + ax[d];
      prob.inequalities.push_back({Poly::var(L.v(k, d)), -vmax, vmax, "velocity " + tag});
      prob.inequalities.push_back({e.coast_vel, -vmax, vmax, "coast velocity " + tag});
      const Box& b = P.boxes[k];
      prob.inequalities.push_back({e.coast_start, b.lo[d], b.hi[d], "coast start " + tag});
      prob.inequalities.push_back({e.coast_end, b.lo[d], b.hi[d], "coast end " + tag});
      for (int i = 0; i < 3; ++i) {
        prob.inequalities.push_back({Poly::var(L.tau(k, d, i)), 0.0, kInf,
                                     "duration " + tag + std::to_string(i)});
      }
    }
  }
  const Poly a0 = Poly::var(L.alpha_start());
  const Poly an = Poly::var(L.alpha_end());
  const Poly s0 = Poly::var(L.slack_start());
  const Poly sn = Poly::var(L.slack_end());
  prob.inequalities.push_back({a0 - s0 * s0, -kInf, 1.0, "alpha0F upper"});
  prob.inequalities.push_back({a0 + s0 * s0, -1.0, kInf, "alpha0F lower"});
  prob.inequalities.push_back({an - sn * sn, -kInf, 1.0, "alphanF upper"});
  prob.inequalities.push_back({an + sn * sn, -1.0, kInf, "alphanF lower"});
  for (size_t k = 1; k < n; ++k) {
    if (L.delta[k] < 0) continue;
    for (int d = 0; d < 2; ++d) {
      prob.inequalities.push_back({Poly::var(L.delta[k] + d), sel.delta_bounds[k].lo[d],
                                   sel.delta_bounds[k].hi[d],
                                   "offset " + std::to_string(k) + ax[d]});
    }
  }
  return P;
}

// Number of one-sided inequality rows, the count a textbook formulation uses.
inline size_t one_sided_inequality_count(const Problem& prob) {
  size_t count = 0;
  for (const auto& c : prob.inequalities) {
    count += (std::isfinite(c.lo) ? 1 : 0) + (std::isfinite(c.hi) ? 1 : 0);
  }
  return count;
}

// Default base phase length for the initial guess: slow enough to be well
// inside the velocity limit on long segments, never below 0.06 s.
inline double default_tau_base(Vec2 from, Vec2 to, const Vehicle& v) {
  return std::max(0.06, norm_inf(to - from) / (8.2 * 0.5 * v.v_max));
}

// Phase durations (t', 7t', 0.2t') per axis with the entry velocity chosen so
// each primitive ends exactly on its next waypoint. `scale` multiplies t'.
inline std::vector<double> initial_guess(const NlpProblem& P, double scale = 1.0) {
  const Layout& L = P.layout;
  const auto& sel = P.selection;
  std::vector<double> x(L.size(), 0.0);
  x[L.alpha_start()] = sel.signs[0][sel.free_axis_start];
  x[L.alpha_end()] = sel.signs[L.n][sel.free_axis_end];
  const double a = P.vehicle.a_max;
  for (size_t k = 0; k < L.n; ++k) {
    const double t =
        scale * default_tau_base(sel.waypoints[k], sel.waypoints[k + 1], P.vehicle);
    const double t0 = t;
    const double t1 = 7.0 * t;
    const double t2 = 0.2 * t;
    const double total = t0 + t1 + t2;
    for (int d = 0; d < 2; ++d) {
      x[L.tau(k, d, 0)] = t0;
      x[L.tau(k, d, 1)] = t1;
      x[L.tau(k, d, 2)] = t2;
      const double as = start_alpha_free(P, k, d) ? x[L.alpha_start()] : sel.signs[k][d];
      const double ae = end_alpha_free(P, k, d) ? x[L.alpha_end()] : sel.signs[k + 1][d];
      const double accel_part =
          a * as * (0.5 * t0 * t0 + t0 * (t1 + t2)) + 0.5 * a * ae * t2 * t2;
      x[L.v(k, d)] = (sel.waypoints[k + 1][d] - sel.waypoints[k][d] - accel_part) / total;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Solutions.

inline double alpha_value(const NlpProblem& P, std::span<const double> x, size_t k,
                          int axis, bool at_start) {
  return at_start ? start_alpha(P, k, axis)(x) : end_alpha(P, k, axis)(x);
}

inline Primitive1D primitive_from(const NlpProblem& P, std::span<const double> x,
                                  size_t k, int axis) {
  const Layout& L = P.layout;
  Primitive1D prim;
  prim.alpha_start = alpha_value(P, x, k, axis, true);
  prim.alpha_end = alpha_value(P, x, k, axis, false);
  prim.p = start_position(P, k, axis)(x);
  prim.v = x[L.v(k, axis)];
  prim.a_max = P.vehicle.a_max;
  for (int i = 0; i < 3; ++i) prim.tau[i] = std::max(0.0, x[L.tau(k, axis, i)]);
  return prim;
}

inline Trajectory to_trajectory(const NlpProblem& P, std::span<const double> x) {
  Trajectory traj;
  double t = 0.0;
  for (size_t k = 0; k < P.layout.n; ++k) {
    Primitive2D prim;
    prim.axis[0] = primitive_from(P, x, k, 0);
    prim.axis[1] = primitive_from(P, x, k, 1);
    traj.pieces.push_back({t, prim});
    t += prim.duration();
  }
  traj.t_move = t;
  return traj;
}

// Moving time encoded by a solution.
inline double moving_time(const NlpProblem& P, std::span<const double> x) {
  double t = 0.0;
  for (size_t k = 0; k < P.layout.n; ++k) {
    for (int i = 0; i < 3; ++i) t += x[P.layout.tau(k, 0, i)];
  }
  return t;
}

struct ExtremumViolation {
  size_t k;
  int axis;
  int phase;
  double position;
  double lo;
  double hi;
};

// Velocity zero-crossings inside a primitive whose position leaves the
// primitive's corridor box by more than tol.
inline std::vector<ExtremumViolation> extremum_violations(const NlpProblem& P,
                                                          std::span<const double> x,
                                                          double tol = 1e-7) {
  std::vector<ExtremumViolation> out;
  for (size_t k = 0; k < P.layout.n; ++k) {
    for (int d = 0; d < 2; ++d) {
      const Box& b = P.boxes[k];
      for (const auto& e : extreme_points(primitive_from(P, x, k, d))) {
        if (e.p < b.lo[d] - tol || e.p > b.hi[d] + tol) {
          out.push_back({k, d, e.phase, e.p, b.lo[d], b.hi[d]});
        }
      }
    }
  }
  return out;
}

// Constrains the position at each violating zero-crossing to the corridor box.
// With a fixed sign alpha the extremum is p - alpha v^2 / (2a); with the free
// multiplier the relation is multiplied through by alpha, using the sign it
// has in the current solution. Returns the number of inequalities added.
inline size_t add_extremum_constraints(NlpProblem& P, std::span<const double> x,
                                       double tol = 1e-7) {
  size_t added = 0;
  const double a = P.vehicle.a_max;
  const char* ax = "xy";
  for (const auto& v : extremum_violations(P, x, tol)) {
    const RepairKey key{v.k, v.axis, v.phase};
    if (std::find(P.repairs.begin(), P.repairs.end(), key) != P.repairs.end()) continue;
    if (v.phase != 0 && v.phase != 2) continue;  // coasting at rest is already boxed
    P.repairs.push_back(key);

    const bool at_start = v.phase == 0;
    const Poly pos = at_start ? start_position(P, v.k, v.axis)
                              : start_position(P, v.k + 1, v.axis);
    const Poly vel = at_start ? velocity(P, v.k, v.axis) : velocity(P, v.k + 1, v.axis);
    const bool free = at_start ? start_alpha_free(P, v.k, v.axis)
                               : end_alpha_free(P, v.k, v.axis);
    const Poly alpha = at_start ? start_alpha(P, v.k, v.axis) : end_alpha(P, v.k, v.axis);
    const std::string tag = "extremum " + std::to_string(v.k) + ax[v.axis] + " phase " +
                            std::to_string(v.phase);
    const Poly v2 = vel * vel * (1.0 / (2.0 * a));
    if (!free) {
      const double s = alpha(x);
      const Poly expr = pos - s * v2;
      P.problem.inequalities.push_back({expr, v.lo, kInf, tag + " lower"});
      P.problem.inequalities.push_back({expr, -kInf, v.hi, tag + " upper"});
    } else {
      const double sigma = sign_nonzero(alpha(x));
      P.problem.inequalities.push_back(
          {sigma * (alpha * (pos - v.lo) - v2), 0.0, kInf, tag + " lower"});
      P.problem.inequalities.push_back(
          {sigma * (alpha * (v.hi - pos) + v2), 0.0, kInf, tag + " upper"});
    }
    added += 2;
  }
  return added;
}

inline nlohmann::json problem_to_json(const NlpProblem& P) {
  const auto& prob = P.problem;
  auto vars = nlohmann::json::array();
  for (const auto& name : prob.var_names) vars.push_back(name);
  auto finite_or_null = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  auto eqs = nlohmann::json::array();
  for (const auto& e : prob.equalities) {
    eqs.push_back({{"label", e.label},
                   {"value", e.value},
                   {"expr", e.g.to_string(prob.var_names)},
                   {"support", e.g.support()}});
  }
  auto ineqs = nlohmann::json::array();
  for (const auto& c : prob.inequalities) {
    ineqs.push_back({{"label", c.label},
                     {"lo", finite_or_null(c.lo)},
                     {"hi", finite_or_null(c.hi)},
                     {"expr", c.g.to_string(prob.var_names)},
                     {"support", c.g.support()}});
  }
  return {{"variables", vars},
          {"objective", prob.objective.to_string(prob.var_names)},
          {"equalities", eqs},
          {"inequalities", ineqs}};
}

}  // namespace pmp::nlp
