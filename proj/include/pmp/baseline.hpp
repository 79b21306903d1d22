#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "pmp/corridors.hpp"
#include "pmp/kinematics.hpp"
#include "pmp/planner.hpp"
#include "pmp/polynomial.hpp"
#include "pmp/solver.hpp"
#include "pmp/world.hpp"

namespace pmp {

// Index map of the transcribed optimal control problem: one stage per
// corridor, N constant-acceleration intervals per stage, grid points shared
// between consecutive stages.
struct OcpLayout {
  size_t stages = 0;
  int N = 30;

  int points() const { return static_cast<int>(stages) * N + 1; }
  int intervals() const { return static_cast<int>(stages) * N; }
  int p(int g, int axis) const { return 4 * g + axis; }
  int v(int g, int axis) const { return 4 * g + 2 + axis; }
  int a(int i, int axis) const { return 4 * points() + 2 * i + axis; }
  int T(size_t stage) const { return 4 * points() + 2 * intervals() + static_cast<int>(stage); }
  int size() const { return 4 * points() + 2 * intervals() + static_cast<int>(stages); }
  size_t stage_of_interval(int i) const { return static_cast<size_t>(i / N); }
};

struct TranscribedOcp {
  nlp::Problem problem;
  OcpLayout layout;
};

inline TranscribedOcp transcribe_ocp(const CorridorSequence& seq, const Scenario& s,
                                     int N = 30) {
  TranscribedOcp ocp;
  OcpLayout& L = ocp.layout;
  L.stages = seq.size();
  L.N = N;
  auto& prob = ocp.problem;
  prob.var_names.resize(L.size());
  const char* ax = "xy";
  for (int g = 0; g < L.points(); ++g) {
    for (int d = 0; d < 2; ++d) {
      prob.var_names[L.p(g, d)] = "p" + std::to_string(g) + ax[d];
      prob.var_names[L.v(g, d)] = "v" + std::to_string(g) + ax[d];
    }
  }
  for (int i = 0; i < L.intervals(); ++i) {
    for (int d = 0; d < 2; ++d) prob.var_names[L.a(i, d)] = "a" + std::to_string(i) + ax[d];
  }
  for (size_t st = 0; st < L.stages; ++st) prob.var_names[L.T(st)] = "T" + std::to_string(st);

  using nlp::Poly;
  Poly objective;
  for (size_t st = 0; st < L.stages; ++st) objective += Poly::var(L.T(st));
  prob.objective = objective;

  const int last = L.points() - 1;
  for (int d = 0; d < 2; ++d) {
    prob.equalities.push_back({Poly::var(L.p(0, d)), s.p0[d], std::string("p0") + ax[d]});
    prob.equalities.push_back({Poly::var(L.v(0, d)), s.v0[d], std::string("v0") + ax[d]});
    prob.equalities.push_back({Poly::var(L.p(last, d)), s.pn[d], std::string("pn") + ax[d]});
    prob.equalities.push_back({Poly::var(L.v(last, d)), 0.0, std::string("vn") + ax[d]});
  }
  const double inv_n = 1.0 / N;
  for (int i = 0; i < L.intervals(); ++i) {
    const Poly h = inv_n * Poly::var(L.T(L.stage_of_interval(i)));
    for (int d = 0; d < 2; ++d) {
      const Poly p = Poly::var(L.p(i, d));
      const Poly v = Poly::var(L.v(i, d));
      const Poly a = Poly::var(L.a(i, d));
      const std::string tag = std::to_string(i) + ax[d];
      prob.equalities.push_back(
          {p + v * h + 0.5 * a * h * h - Poly::var(L.p(i + 1, d)), 0.0, "step p " + tag});
      prob.equalities.push_back({v + a * h - Poly::var(L.v(i + 1, d)), 0.0, "step v " + tag});
    }
  }

  const double vmax = s.vehicle.v_max;
  const double amax = s.vehicle.a_max;
  for (size_t st = 0; st < L.stages; ++st) {
    const Box box = seq[st].inflated(s.vehicle);
    for (int g = static_cast<int>(st) * N; g <= static_cast<int>(st + 1) * N; ++g) {
      for (int d = 0; d < 2; ++d) {
        prob.inequalities.push_back({Poly::var(L.p(g, d)), box.lo[d], box.hi[d],
                                     "corridor " + std::to_string(st) + " point " +
                                         std::to_string(g) + ax[d]});
      }
    }
    prob.inequalities.push_back({Poly::var(L.T(st)), 0.0, nlp::kInf, "duration " + std::to_string(st)});
  }
  for (int g = 0; g < L.points(); ++g) {
    for (int d = 0; d < 2; ++d) {
      prob.inequalities.push_back({Poly::var(L.v(g, d)), -vmax, vmax, "speed " + std::to_string(g) + ax[d]});
    }
  }
  for (int i = 0; i < L.intervals(); ++i) {
    for (int d = 0; d < 2; ++d) {
      prob.inequalities.push_back({Poly::var(L.a(i, d)), -amax, amax, "accel " + std::to_string(i) + ax[d]});
    }
  }
  return ocp;
}

// Straight-line interpolation through the start, the overlap centers and the
// goal at half the speed limit per axis, with zero acceleration.
inline std::vector<double> ocp_initial_guess(const TranscribedOcp& ocp,
                                             const CorridorSequence& seq,
                                             const Scenario& s) {
  const OcpLayout& L = ocp.layout;
  std::vector<double> x(L.size(), 0.0);
  std::vector<Vec2> nodes{s.p0};
  for (size_t k = 1; k < seq.size(); ++k) nodes.push_back(seq.shrunk_overlap(k, s.vehicle).center());
  nodes.push_back(s.pn);
  const double cruise = 0.5 * s.vehicle.v_max;
  for (size_t st = 0; st < L.stages; ++st) {
    const Vec2 a = nodes[st];
    const Vec2 b = nodes[st + 1];
    const double T = std::max(norm_inf(b - a) / cruise, 0.1);
    x[L.T(st)] = T;
    const Vec2 vel = (1.0 / T) * (b - a);
    for (int j = 0; j <= L.N; ++j) {
      const int g = static_cast<int>(st) * L.N + j;
      const Vec2 p = a + (static_cast<double>(j) / L.N) * (b - a);
      for (int d = 0; d < 2; ++d) {
        x[L.p(g, d)] = p[d];
        x[L.v(g, d)] = vel[d];
      }
    }
  }
  return x;
}

// Piecewise-constant acceleration trajectory encoded by an OCP solution.
inline Trajectory ocp_trajectory(const TranscribedOcp& ocp, std::span<const double> x,
                                 const Vehicle& veh) {
  const OcpLayout& L = ocp.layout;
  Trajectory traj;
  double t = 0.0;
  for (int i = 0; i < L.intervals(); ++i) {
    const double h = std::max(0.0, x[L.T(L.stage_of_interval(i))]) / L.N;
    Primitive2D prim;
    for (int d = 0; d < 2; ++d) {
      Primitive1D& a = prim.axis[d];
      a.alpha_start = x[L.a(i, d)] / veh.a_max;
      a.alpha_end = 0.0;
      a.p = x[L.p(i, d)];
      a.v = x[L.v(i, d)];
      a.a_max = veh.a_max;
      a.tau = {h, 0.0, 0.0};
    }
    traj.pieces.push_back({t, prim});
    t += h;
  }
  traj.t_move = t;
  return traj;
}

struct BaselineResult {
  Trajectory trajectory;
  bool has_trajectory = false;
  PlanReport report;
  TranscribedOcp ocp;
  std::vector<double> x;
};

inline BaselineResult solve_baseline(const CorridorSequence& seq, const Scenario& s,
                                     int N = 30, const nlp::SolverOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  BaselineResult out;
  out.ocp = transcribe_ocp(seq, s, N);
  out.report.n_corridors = seq.size();
  auto res = nlp::solve(out.ocp.problem, ocp_initial_guess(out.ocp, seq, s), opt);
  out.report.t_solver = res.wall_time;
  out.report.solver_iterations = res.iterations;
  out.report.n_solves = 1;
  out.x = res.x;
  if (res.ok()) {
    out.trajectory = ocp_trajectory(out.ocp, res.x, s.vehicle);
    out.has_trajectory = true;
    out.report.t_move = out.trajectory.t_move;
    out.report.status = PlanStatus::Solved;
  } else {
    out.report.status = PlanStatus::SolverFailure;
    out.report.message = std::string("solver: ") + nlp::to_string(res.status);
  }
  out.report.t_total =
      std::max(out.report.t_solver,
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return out;
}

}  // namespace pmp
