#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "pmp/baseline.hpp"
#include "pmp/corridors.hpp"
#include "pmp/errors.hpp"
#include "pmp/planner.hpp"
#include "pmp/validation.hpp"
#include "pmp/world.hpp"

namespace pmp::bench {

enum class Kind { Random, Structured };

struct BenchConfig {
  Kind kind = Kind::Random;
  size_t count = 100;
  double density = 0.1;
  std::uint64_t seed = 1;
  int rows = 8;
  int cols = 10;
  double cell_size = 0.5;
  double width = 0.25;
  double length = 0.25;
  double v_min = 0.5, v_max = 2.0;
  double a_min = 2.0, a_max = 6.0;
  double min_separation_factor = 5.0;  // endpoints farther apart than factor * W
  int max_rejections = 10000;
  int baseline_grid = 30;
  int compare_grid = 0;  // second baseline resolution, 0 = off
  unsigned jobs = 1;
  std::optional<OccupancyGrid> fixed_map;  // used for the structured kind

  void validate() const {
    if (!(density >= 0.0 && density < 1.0)) throw ValidationError("density must be in [0, 1)");
    if (!(v_min > 0.0 && v_max >= v_min && a_min > 0.0 && a_max >= a_min)) {
      throw ValidationError("sampling ranges must be positive and ordered");
    }
    if (rows <= 0 || cols <= 0 || !(cell_size > 0.0)) throw ValidationError("bad grid size");
    if (!(width > 0.0 && length > 0.0)) throw ValidationError("bad vehicle size");
    if (kind == Kind::Structured && !fixed_map) {
      throw ValidationError("structured benchmark needs a map");
    }
  }
};

// Portable uniform draw in [0, 1) from the raw 64-bit engine output, so the
// generated suite does not depend on the standard library's distributions.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

// One benchmark instance; instance i only depends on (seed, i).
inline Scenario generate_instance(const BenchConfig& cfg, size_t index) {
  Rng rng(cfg.seed, index);
  Scenario s;
  s.vehicle = {cfg.width, cfg.length, rng.uniform(cfg.v_min, cfg.v_max),
               rng.uniform(cfg.a_min, cfg.a_max)};
  auto random_map = [&] {
    OccupancyGrid g(cfg.rows, cfg.cols, cfg.cell_size);
    for (int r = 0; r < cfg.rows; ++r) {
      for (int c = 0; c < cfg.cols; ++c) {
        if (rng.uniform() < cfg.density) g.set_occupied({r, c});
      }
    }
    return g;
  };
  s.grid = cfg.fixed_map ? *cfg.fixed_map : random_map();
  const Box ext = s.grid.extent();
  const Vec2 half = s.vehicle.half_extent();
  auto draw_point = [&] {
    return Vec2{rng.uniform(ext.lo.x + half.x, ext.hi.x - half.x),
                rng.uniform(ext.lo.y + half.y, ext.hi.y - half.y)};
  };
  for (int attempt = 0; attempt < cfg.max_rejections; ++attempt) {
    if (!cfg.fixed_map && attempt > 0 && attempt % 100 == 0) s.grid = random_map();
    s.p0 = draw_point();
    s.pn = draw_point();
    s.v0 = {0.0, 0.0};
    if (norm(s.p0 - s.pn) <= cfg.min_separation_factor * cfg.width) continue;
    if (!footprint_free(s.p0, s.vehicle, s.grid) || !footprint_free(s.pn, s.vehicle, s.grid)) {
      continue;
    }
    try {
      build_corridor_sequence(s);
    } catch (const Error&) {
      continue;  // unreachable goal or degenerate corridor chain
    }
    return s;
  }
  throw GenerationStuck("no valid instance after " + std::to_string(cfg.max_rejections) +
                        " rejections (map too dense?)");
}

struct OcpRecord {
  std::string status = "Skipped";
  double t_move = NAN;
  size_t violations = 0;
  double t_solver = NAN;
  double t_total = NAN;
};

struct InstanceRecord {
  size_t index = 0;
  std::string generation = "ok";
  double v_max = NAN;
  double a_max = NAN;
  Vec2 p0, pn;
  size_t n_corridors = 0;
  std::string pmp_status = "Skipped";
  double pmp_t_move = NAN;
  int repair_rounds = 0;
  int flip_rounds = 0;
  bool pmp_feasible = false;
  size_t pmp_violations = 0;
  double pmp_t_solver = NAN;
  double pmp_t_total = NAN;
  OcpRecord ocp;
  OcpRecord ocp_compare;
  double eps_move = NAN;
};

inline OcpRecord run_baseline(const CorridorSequence& seq, const Scenario& s, int N) {
  OcpRecord rec;
  auto res = solve_baseline(seq, s, N);
  rec.status = to_string(res.report.status);
  rec.t_solver = res.report.t_solver;
  rec.t_total = res.report.t_total;
  if (res.has_trajectory) {
    rec.t_move = res.trajectory.t_move;
    rec.violations = intersample_violation_count(res.trajectory, seq, s.vehicle, 100.0);
  }
  return rec;
}

inline InstanceRecord run_instance(const BenchConfig& cfg, size_t index) {
  InstanceRecord rec;
  rec.index = index;
  Scenario s;
  try {
    s = generate_instance(cfg, index);
  } catch (const GenerationStuck&) {
    rec.generation = "GenerationStuck";
    return rec;
  }
  rec.v_max = s.vehicle.v_max;
  rec.a_max = s.vehicle.a_max;
  rec.p0 = s.p0;
  rec.pn = s.pn;

  const auto pmp = plan(s);
  rec.n_corridors = pmp.report.n_corridors;
  rec.pmp_status = to_string(pmp.report.status);
  rec.repair_rounds = pmp.report.n_repair_rounds;
  rec.flip_rounds = pmp.report.n_flip_rounds;
  rec.pmp_t_solver = pmp.report.t_solver;
  rec.pmp_t_total = pmp.report.t_total;
  if (pmp.has_trajectory && succeeded(pmp.report.status)) {
    rec.pmp_t_move = pmp.trajectory.t_move;
    const auto check = check_trajectory(pmp.trajectory, s, &pmp.corridors, 100.0, 1e-6);
    rec.pmp_feasible = check.ok();
    rec.pmp_violations = check.corridor_violations + check.obstacle_violations +
                         check.speed_violations + check.accel_violations;
  }
  if (pmp.corridors.size() > 0) {
    rec.ocp = run_baseline(pmp.corridors, s, cfg.baseline_grid);
    if (cfg.compare_grid > 0) rec.ocp_compare = run_baseline(pmp.corridors, s, cfg.compare_grid);
  }
  if (std::isfinite(rec.pmp_t_move) && std::isfinite(rec.ocp.t_move) && rec.ocp.t_move > 0.0) {
    rec.eps_move = (rec.pmp_t_move - rec.ocp.t_move) / rec.ocp.t_move;
  }
  return rec;
}

inline std::vector<InstanceRecord> run_suite(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<InstanceRecord> records(cfg.count);
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.count)));
  if (jobs == 1) {
    for (size_t i = 0; i < cfg.count; ++i) records[i] = run_instance(cfg, i);
    return records;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < cfg.count; i = next++) records[i] = run_instance(cfg, i);
    });
  }
  for (auto& t : pool) t.join();
  return records;
}

// ---------------------------------------------------------------------------
// CSV output. Results hold only deterministic quantities; wall-clock timings
// go to a separate file.

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string fmt_ms(double seconds) {
  if (!std::isfinite(seconds)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", seconds * 1e3);
  return buf;
}

inline const char* kResultsHeader =
    "index,generation,v_max,a_max,p0x,p0y,pnx,pny,n_corridors,pmp_status,pmp_t_move,"
    "repair_rounds,flip_rounds,pmp_feasible,pmp_violations,ocp_status,ocp_t_move,"
    "ocp_violations,ocp2_status,ocp2_t_move,ocp2_violations,eps_move";

inline std::string results_csv(const std::vector<InstanceRecord>& recs) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto& r : recs) {
    out += std::to_string(r.index) + "," + r.generation + "," + fmt(r.v_max) + "," +
           fmt(r.a_max) + "," + fmt(r.p0.x) + "," + fmt(r.p0.y) + "," + fmt(r.pn.x) + "," +
           fmt(r.pn.y) + "," + std::to_string(r.n_corridors) + "," + r.pmp_status + "," +
           fmt(r.pmp_t_move) + "," + std::to_string(r.repair_rounds) + "," +
           std::to_string(r.flip_rounds) + "," + (r.pmp_feasible ? "1" : "0") + "," +
           std::to_string(r.pmp_violations) + "," + r.ocp.status + "," + fmt(r.ocp.t_move) +
           "," + std::to_string(r.ocp.violations) + "," + r.ocp_compare.status + "," +
           fmt(r.ocp_compare.t_move) + "," + std::to_string(r.ocp_compare.violations) + "," +
           fmt(r.eps_move) + "\n";
  }
  return out;
}

inline const char* kTimingsHeader =
    "index,pmp_t_solver_ms,pmp_t_total_ms,ocp_t_solver_ms,ocp_t_total_ms,ocp2_t_solver_ms,"
    "ocp2_t_total_ms";

inline std::string timings_csv(const std::vector<InstanceRecord>& recs) {
  std::string out = std::string(kTimingsHeader) + "\n";
  for (const auto& r : recs) {
    out += std::to_string(r.index) + "," + fmt_ms(r.pmp_t_solver) + "," +
           fmt_ms(r.pmp_t_total) + "," + fmt_ms(r.ocp.t_solver) + "," +
           fmt_ms(r.ocp.t_total) + "," + fmt_ms(r.ocp_compare.t_solver) + "," +
           fmt_ms(r.ocp_compare.t_total) + "\n";
  }
  return out;
}

// Column-keyed view of a CSV document with a header row.
class CsvTable {
 public:
  explicit CsvTable(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::istringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      if (header) {
        for (size_t i = 0; i < fields.size(); ++i) columns_[fields[i]] = i;
        header = false;
      } else {
        rows_.push_back(std::move(fields));
      }
    }
  }
  size_t size() const { return rows_.size(); }
  const std::string& at(size_t row, const std::string& col) const {
    return rows_.at(row).at(columns_.at(col));
  }
  double number(size_t row, const std::string& col) const {
    const auto& s = at(row, col);
    return s == "nan" ? NAN : std::stod(s);
  }

 private:
  std::map<std::string, size_t> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct Stats {
  size_t count = 0;
  double mean = NAN, max = NAN, median = NAN, stddev = NAN;
};

// Finite values only. Standard deviation uses the n - 1 denominator.
inline Stats stats_of(std::vector<double> v) {
  std::erase_if(v, [](double x) { return !std::isfinite(x); });
  Stats s;
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / v.size();
  s.max = v.back();
  s.median = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
  return s;
}

inline nlohmann::json stats_json(const Stats& s) {
  auto num = [](double x) -> nlohmann::json {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  return {{"count", s.count}, {"mean", num(s.mean)}, {"max", num(s.max)},
          {"median", num(s.median)}, {"stddev", num(s.stddev)}};
}

// Summary statistics recomputed from the CSV text alone.
inline nlohmann::json summarize(const std::string& results, const std::string& timings) {
  const CsvTable r(results);
  const CsvTable t(timings);
  std::vector<double> pmp_move, ocp_move, eps, pmp_solver, ocp_solver, pmp_total, ocp_total;
  size_t pmp_ok = 0, pmp_fail = 0, pmp_infeasible = 0, ocp_fail = 0, gen_stuck = 0;
  size_t ocp_viol_instances = 0, ocp2_viol_instances = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (r.at(i, "generation") != "ok") {
      ++gen_stuck;
      continue;
    }
    const auto& st = r.at(i, "pmp_status");
    if (st == "Solved" || st == "SolvedAnalytic") {
      ++pmp_ok;
      if (r.at(i, "pmp_feasible") != "1") ++pmp_infeasible;
    } else {
      ++pmp_fail;
    }
    if (r.at(i, "ocp_status") != "Solved") ++ocp_fail;
    if (std::stoul(r.at(i, "ocp_violations")) > 0) ++ocp_viol_instances;
    if (std::stoul(r.at(i, "ocp2_violations")) > 0) ++ocp2_viol_instances;
    pmp_move.push_back(r.number(i, "pmp_t_move"));
    ocp_move.push_back(r.number(i, "ocp_t_move"));
    eps.push_back(r.number(i, "eps_move"));
  }
  for (size_t i = 0; i < t.size(); ++i) {
    pmp_solver.push_back(t.number(i, "pmp_t_solver_ms"));
    pmp_total.push_back(t.number(i, "pmp_t_total_ms"));
    ocp_solver.push_back(t.number(i, "ocp_t_solver_ms"));
    ocp_total.push_back(t.number(i, "ocp_t_total_ms"));
  }
  return {{"instances", r.size()},
          {"generation_failures", gen_stuck},
          {"pmp_success", pmp_ok},
          {"pmp_failures", pmp_fail},
          {"pmp_infeasible", pmp_infeasible},
          {"ocp_failures", ocp_fail},
          {"ocp_violation_instances", ocp_viol_instances},
          {"ocp2_violation_instances", ocp2_viol_instances},
          {"pmp_t_move", stats_json(stats_of(pmp_move))},
          {"ocp_t_move", stats_json(stats_of(ocp_move))},
          {"eps_move", stats_json(stats_of(eps))},
          {"pmp_t_solver_ms", stats_json(stats_of(pmp_solver))},
          {"pmp_t_total_ms", stats_json(stats_of(pmp_total))},
          {"ocp_t_solver_ms", stats_json(stats_of(ocp_solver))},
          {"ocp_t_total_ms", stats_json(stats_of(ocp_total))}};
}

}  // namespace pmp::bench
