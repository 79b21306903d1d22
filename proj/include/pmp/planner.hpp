#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmp/corridors.hpp"
#include "pmp/errors.hpp"
#include "pmp/heuristics.hpp"
#include "pmp/kinematics.hpp"
#include "pmp/nlp.hpp"
#include "pmp/solver.hpp"
#include "pmp/validation.hpp"
#include "pmp/world.hpp"

namespace pmp {

enum class PlanStatus { Solved, SolvedAnalytic, SolverFailure, NoPath, DegenerateInput };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Solved: return "Solved";
    case PlanStatus::SolvedAnalytic: return "SolvedAnalytic";
    case PlanStatus::SolverFailure: return "SolverFailure";
    case PlanStatus::NoPath: return "NoPath";
    case PlanStatus::DegenerateInput: return "DegenerateInput";
  }
  return "?";
}

inline bool succeeded(PlanStatus s) {
  return s == PlanStatus::Solved || s == PlanStatus::SolvedAnalytic;
}

struct PlanReport {
  PlanStatus status = PlanStatus::SolverFailure;
  double t_solver = 0.0;  // wall time inside the optimizer, all solves
  double t_total = 0.0;   // wall time of the whole plan call
  double t_move = 0.0;
  size_t n_corridors = 0;
  int n_repair_rounds = 0;
  int n_flip_rounds = 0;
  int n_solves = 0;
  int solver_iterations = 0;
  double max_slack = 0.0;
  std::string message;
};

struct PlannerOptions {
  nlp::SolverOptions solver;
  double warm_mu = 1e-3;  // barrier start for warm-started re-solves
  int max_repair_rounds = 5;
  int max_flip_rounds = 3;
  double coast_eps = 1e-4;  // phase length below which a waypoint is coasted through
  double check_rate = 100.0;
  bool analytic_fast_path = true;
  bool flip_loop = true;
  // Initial phase-length multipliers tried in order until a solve succeeds.
  std::vector<double> guess_scales{1.0, 2.5, 0.5};
};

struct PlanResult {
  Trajectory trajectory;
  bool has_trajectory = false;
  PlanReport report;
  CorridorSequence corridors;
  std::optional<PrimitiveSelection> initial_selection;
  std::optional<PrimitiveSelection> selection;  // final, after flips
  double t_move_before_flips = 0.0;
};

// True when the trajectory stays in the admissible corridor union at uniform
// samples and at every velocity zero-crossing.
inline bool corridor_feasible(const Trajectory& traj, const CorridorSequence& seq,
                              const Vehicle& veh, double rate_hz, double tol = 1e-9) {
  for (double t : check_times(traj, rate_hz)) {
    if (!seq.inflated_union_contains(traj.at(t).p, veh, tol)) return false;
  }
  return true;
}

// Per-axis braking distance v^2 / (2 a_max) against the room left to the
// admissible corridor bound ahead of the vehicle.
inline bool emergency_feasibility_note(const Scenario& s, const Corridor& corridor) {
  const Box box = corridor.inflated(s.vehicle);
  for (int d = 0; d < 2; ++d) {
    const double v = s.v0[d];
    if (v == 0.0) continue;
    const double braking = v * v / (2.0 * s.vehicle.a_max);
    const double margin = v > 0.0 ? box.hi[d] - s.p0[d] : s.p0[d] - box.lo[d];
    if (braking > margin + 1e-12) return false;
  }
  return true;
}

namespace detail {

struct SolveState {
  nlp::NlpProblem problem;
  std::vector<double> x;
};

// Solves and then repairs corridor violations at velocity zero-crossings. The
// number of violations must drop every round.
inline std::optional<SolveState> solve_with_repair(nlp::NlpProblem P,
                                                   std::vector<double> x0,
                                                   const PlannerOptions& opt,
                                                   bool warm, PlanReport& rep,
                                                   std::string& why) {
  nlp::SolverOptions so = opt.solver;
  if (warm) so.mu_init = opt.warm_mu;
  auto res = nlp::solve(P.problem, std::move(x0), so);
  rep.t_solver += res.wall_time;
  rep.solver_iterations += res.iterations;
  ++rep.n_solves;
  if (!res.ok()) {
    why = std::string("solver: ") + nlp::to_string(res.status);
    return std::nullopt;
  }
  auto violations = nlp::extremum_violations(P, res.x);
  int rounds = 0;
  while (!violations.empty()) {
    if (rounds >= opt.max_repair_rounds) {
      why = "repair rounds exhausted";
      return std::nullopt;
    }
    if (nlp::add_extremum_constraints(P, res.x) == 0) {
      why = "extremum violation persists after repair";
      return std::nullopt;
    }
    ++rounds;
    ++rep.n_repair_rounds;
    so.mu_init = opt.warm_mu;
    auto next = nlp::solve(P.problem, res.x, so);
    rep.t_solver += next.wall_time;
    rep.solver_iterations += next.iterations;
    ++rep.n_solves;
    if (!next.ok()) {
      why = std::string("repair solve: ") + nlp::to_string(next.status);
      return std::nullopt;
    }
    auto after = nlp::extremum_violations(P, next.x);
    if (after.size() >= violations.size()) {
      why = "repair did not reduce violations";
      return std::nullopt;
    }
    violations = std::move(after);
    res = std::move(next);
  }
  return SolveState{std::move(P), std::move(res.x)};
}

// Interior waypoints the solution passes without accelerating on either side.
inline std::vector<size_t> coasted_waypoints(const nlp::NlpProblem& P,
                                             const std::vector<double>& x, double eps) {
  std::vector<size_t> out;
  const auto& L = P.layout;
  for (size_t k = 1; k < L.n; ++k) {
    bool coasting = true;
    for (int d = 0; d < 2; ++d) {
      coasting = coasting && x[L.tau(k - 1, d, 2)] < eps && x[L.tau(k, d, 0)] < eps;
    }
    if (coasting) out.push_back(k);
  }
  return out;
}

// A cold start occasionally stalls at a degenerate vertex. Rescaling the
// initial phase durations moves the start away from it.
inline std::optional<SolveState> cold_solve(const nlp::NlpProblem& P, const PlannerOptions& opt,
                                            PlanReport& rep, std::string& why) {
  for (double scale : opt.guess_scales) {
    auto state = solve_with_repair(P, nlp::initial_guess(P, scale), opt, false, rep, why);
    if (state) return state;
  }
  return std::nullopt;
}

struct FlipStep {
  PrimitiveSelection selection;  // signs flipped at the coasted waypoints
  std::vector<double> pinned;    // pre-flip solution with the coasted phases at zero
};

// Flips the signs at coasted waypoints. The vanishing phases next to them are
// first pinned to zero by a warm re-solve of the current problem. A zero
// length phase does not care about its sign, so the pinned solution is
// feasible for the flipped profile too and warm-starts it.
inline std::optional<FlipStep> flip_coasted(const nlp::NlpProblem& P,
                                            const std::vector<double>& x,
                                            const PlannerOptions& opt, PlanReport& rep) {
  const auto coasted = coasted_waypoints(P, x, opt.coast_eps);
  if (coasted.empty()) return std::nullopt;
  FlipStep step{P.selection, {}};
  nlp::Problem pinned = P.problem;
  std::vector<int> phases;
  const auto& L = P.layout;
  for (size_t k : coasted) {
    step.selection.signs[k] = -1.0 * step.selection.signs[k];
    for (int d = 0; d < 2; ++d) {
      phases.push_back(L.tau(k - 1, d, 2));
      phases.push_back(L.tau(k, d, 0));
    }
  }
  for (int i : phases) pinned.equalities.push_back({nlp::Poly::var(i), 0.0, "pinned phase"});
  nlp::SolverOptions so = opt.solver;
  so.mu_init = opt.warm_mu;
  auto res = nlp::solve(pinned, x, so);
  rep.t_solver += res.wall_time;
  rep.solver_iterations += res.iterations;
  ++rep.n_solves;
  if (!res.ok()) return std::nullopt;
  for (int i : phases) res.x[static_cast<size_t>(i)] = 0.0;
  step.pinned = std::move(res.x);
  return step;
}

inline double max_slack(const nlp::NlpProblem& P, const std::vector<double>& x) {
  return std::max(std::abs(x[P.layout.slack_start()]), std::abs(x[P.layout.slack_end()]));
}

}  // namespace detail

inline PlanResult plan(const Scenario& s, const PlannerOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult out;
  PlanReport& rep = out.report;
  auto finish = [&](PlanStatus status, std::string message = {}) {
    rep.status = status;
    if (!message.empty()) rep.message = std::move(message);
    if (out.has_trajectory) rep.t_move = out.trajectory.t_move;
    rep.t_total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.t_total = std::max(rep.t_total, rep.t_solver);
    return out;
  };

  if (s.grid.cell_size() < std::max(s.vehicle.width, s.vehicle.length)) {
    return finish(PlanStatus::DegenerateInput, "cell size smaller than the vehicle");
  }
  try {
    out.corridors = build_corridor_sequence(s);
  } catch (const NoPathError& e) {
    return finish(PlanStatus::NoPath, e.what());
  } catch (const DegenerateSequence& e) {
    return finish(PlanStatus::DegenerateInput, e.what());
  } catch (const OutOfBounds& e) {
    return finish(PlanStatus::DegenerateInput, e.what());
  }
  const auto& seq = out.corridors;
  rep.n_corridors = seq.size();

  if (opt.analytic_fast_path) {
    Trajectory direct = analytic_plan_2d(s);
    if (corridor_feasible(direct, seq, s.vehicle, opt.check_rate)) {
      out.trajectory = std::move(direct);
      out.has_trajectory = true;
      return finish(PlanStatus::SolvedAnalytic);
    }
  }

  PrimitiveSelection sel;
  nlp::NlpProblem problem;
  try {
    sel = select_primitives(seq, s);
    problem = nlp::assemble(sel, seq, s);
  } catch (const EmptyCandidates& e) {
    return finish(PlanStatus::DegenerateInput, e.what());
  } catch (const SelectionMismatch& e) {
    return finish(PlanStatus::DegenerateInput, e.what());
  }
  out.initial_selection = sel;

  std::string why;
  auto state = detail::cold_solve(problem, opt, rep, why);
  if (!state) return finish(PlanStatus::SolverFailure, why);
  out.t_move_before_flips = nlp::moving_time(state->problem, state->x);

  for (int round = 0; opt.flip_loop && round < opt.max_flip_rounds; ++round) {
    auto step = detail::flip_coasted(state->problem, state->x, opt, rep);
    if (!step) break;
    auto reassembled = nlp::assemble(step->selection, seq, s);
    std::string flip_why;
    auto candidate = detail::solve_with_repair(std::move(reassembled), step->pinned,
                                               opt, true, rep, flip_why);
    if (!candidate) break;
    const double before = nlp::moving_time(state->problem, state->x);
    const double after = nlp::moving_time(candidate->problem, candidate->x);
    if (!(after < before - 1e-9)) break;
    state = std::move(candidate);
    ++rep.n_flip_rounds;
  }

  out.selection = state->problem.selection;
  out.trajectory = nlp::to_trajectory(state->problem, state->x);
  out.has_trajectory = true;
  rep.max_slack = detail::max_slack(state->problem, state->x);

  const auto check = check_trajectory(out.trajectory, s, &seq, opt.check_rate, 1e-6);
  if (!check.ok()) {
    return finish(PlanStatus::SolverFailure, "solution failed the feasibility check");
  }
  return finish(PlanStatus::Solved);
}

inline nlohmann::json report_to_json(const PlanReport& r) {
  return {{"status", to_string(r.status)},
          {"t_solver", r.t_solver},
          {"t_total", r.t_total},
          {"t_move", r.t_move},
          {"n_corridors", r.n_corridors},
          {"n_repair_rounds", r.n_repair_rounds},
          {"n_flip_rounds", r.n_flip_rounds},
          {"n_solves", r.n_solves},
          {"solver_iterations", r.solver_iterations},
          {"max_slack", r.max_slack},
          {"message", r.message}};
}

}  // namespace pmp
