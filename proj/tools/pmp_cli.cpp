// Command-line front end: plan, bench, validate and gen.
//
// Exit codes:
//   0   success (plan: Solved or SolvedAnalytic, validate: all checks pass)
//   1   internal error
//   2   usage or input parse error
//   3   file I/O error
//   4   validation failure (invalid scenario or failed trajectory checks)
//   5   instance generation stuck (map too dense)
//   10  NoPath
//   11  SolverFailure
//   12  DegenerateInput

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmp/pmp.hpp"

#ifndef PMP_STRUCTURED_MAP
#define PMP_STRUCTURED_MAP "data/structured.map"
#endif

namespace fs = std::filesystem;

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kInvalid = 4,
  kStuck = 5,
  kNoPath = 10,
  kSolverFailure = 11,
  kDegenerate = 12,
};

int exit_code(pmp::PlanStatus s) {
  switch (s) {
    case pmp::PlanStatus::Solved:
    case pmp::PlanStatus::SolvedAnalytic: return kOk;
    case pmp::PlanStatus::NoPath: return kNoPath;
    case pmp::PlanStatus::SolverFailure: return kSolverFailure;
    case pmp::PlanStatus::DegenerateInput: return kDegenerate;
  }
  return kInternal;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pmp::IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  pmp::write_text_file(path, j.dump(2) + "\n");
}

pmp::Vehicle parse_vehicle(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      size_t used = 0;
      vals.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw pmp::ParseError(0, "--vehicle: not a number: '" + field + "'");
    }
  }
  if (vals.size() != 4) throw pmp::ParseError(0, "--vehicle expects W,L,vmax,amax");
  pmp::Vehicle v{vals[0], vals[1], vals[2], vals[3]};
  v.validate();
  return v;
}

// ---------------------------------------------------------------------------

struct PlanArgs {
  std::string scenario;
  std::string out;
  double rate = 100.0;
};

int cmd_plan(const PlanArgs& a) {
  const pmp::Scenario s = pmp::load_scenario_file(a.scenario);
  const fs::path out(a.out);
  ensure_dir(out);
  const auto res = pmp::plan(s);
  const auto& rep = res.report;

  if (res.has_trajectory) {
    pmp::write_text_file(out / "trajectory.csv",
                         pmp::samples_to_csv(pmp::sample(res.trajectory, a.rate)));
    write_json(out / "pieces.json", pmp::trajectory_to_json(res.trajectory));
  }
  write_json(out / "corridors.json", pmp::corridors_to_json(res.corridors));
  if (res.selection) write_json(out / "selection.json", pmp::selection_to_json(*res.selection));
  write_json(out / "report.json", pmp::report_to_json(rep));

  std::printf("status %s  t_move %.6f s  corridors %zu  t_solver %.3f ms\n",
              pmp::to_string(rep.status), rep.t_move, rep.n_corridors, rep.t_solver * 1e3);
  if (!rep.message.empty()) std::printf("note: %s\n", rep.message.c_str());
  return exit_code(rep.status);
}

// ---------------------------------------------------------------------------

struct SuiteArgs {
  std::string kind = "random";
  size_t n = 100;
  double density = 0.1;
  std::uint64_t seed = 1;
  std::string out;
  std::string map;
  int rows = 8;
  int cols = 10;
  double cell_size = 0.5;
  int baseline_grid = 30;
  int compare_grid = 0;
  unsigned jobs = 1;
};

pmp::bench::BenchConfig make_config(const SuiteArgs& a) {
  pmp::bench::BenchConfig cfg;
  cfg.count = a.n;
  cfg.density = a.density;
  cfg.seed = a.seed;
  cfg.rows = a.rows;
  cfg.cols = a.cols;
  cfg.cell_size = a.cell_size;
  cfg.baseline_grid = a.baseline_grid;
  cfg.compare_grid = a.compare_grid;
  cfg.jobs = a.jobs;
  if (a.kind == "structured") {
    cfg.kind = pmp::bench::Kind::Structured;
    cfg.fixed_map = pmp::load_map(pmp::read_text_file(a.map.empty() ? PMP_STRUCTURED_MAP : a.map));
  } else if (!a.map.empty()) {
    throw pmp::ParseError(0, "--map only applies to --kind structured");
  }
  cfg.validate();
  return cfg;
}

int cmd_bench(const SuiteArgs& a) {
  const auto cfg = make_config(a);
  const fs::path out(a.out);
  ensure_dir(out);
  const auto records = pmp::bench::run_suite(cfg);
  const std::string results = pmp::bench::results_csv(records);
  const std::string timings = pmp::bench::timings_csv(records);
  pmp::write_text_file(out / "results.csv", results);
  pmp::write_text_file(out / "timings.csv", timings);
  const auto summary = pmp::bench::summarize(results, timings);
  write_json(out / "summary.json", summary);

  const auto num = [&](const char* key, const char* field) {
    const auto& v = summary.at(key).at(field);
    return v.is_number() ? v.get<double>() : NAN;
  };
  std::printf("instances %zu  pmp success %d  pmp infeasible %d  ocp failures %d\n",
              records.size(), summary.at("pmp_success").get<int>(),
              summary.at("pmp_infeasible").get<int>(), summary.at("ocp_failures").get<int>());
  std::printf("eps_move median %.4f%%  mean %.4f%%\n", 100.0 * num("eps_move", "median"),
              100.0 * num("eps_move", "mean"));
  std::printf("mean t_solver: pmp %.3f ms  ocp %.3f ms\n", num("pmp_t_solver_ms", "mean"),
              num("ocp_t_solver_ms", "mean"));
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_gen(const SuiteArgs& a) {
  const auto cfg = make_config(a);
  const fs::path out(a.out);
  ensure_dir(out);
  nlohmann::json index = nlohmann::json::array();
  for (size_t i = 0; i < cfg.count; ++i) {
    const pmp::Scenario s = pmp::bench::generate_instance(cfg, i);
    char name[32];
    std::snprintf(name, sizeof(name), "scenario_%04zu.json", i);
    write_json(out / name, pmp::scenario_to_json(s));
    index.push_back(name);
  }
  write_json(out / "index.json", {{"seed", cfg.seed}, {"scenarios", index}});
  std::printf("wrote %zu scenarios to %s\n", cfg.count, out.string().c_str());
  return kOk;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string traj;
  std::string map;
  std::string vehicle;
  double tol = 1e-6;
};

int cmd_validate(const ValidateArgs& a) {
  const pmp::Vehicle veh = parse_vehicle(a.vehicle);
  const pmp::OccupancyGrid grid = pmp::load_map(pmp::read_text_file(a.map));
  const auto samples = pmp::parse_samples_csv(pmp::read_text_file(a.traj));
  const auto verdict = pmp::validate_samples(samples, grid, veh, a.tol);
  for (const auto& c : verdict.checks) {
    if (c.passed()) {
      std::printf("%-20s PASS\n", c.name.c_str());
    } else {
      std::printf("%-20s FAIL  %zu sample(s), first at row %zu (%s)\n", c.name.c_str(),
                  c.failures, c.first_row, c.first_detail.c_str());
    }
  }
  std::printf("%zu samples: %s\n", samples.size(), verdict.ok() ? "valid" : "INVALID");
  return verdict.ok() ? kOk : kInvalid;
}

void add_suite_options(CLI::App* cmd, SuiteArgs& a) {
  cmd->add_option("--kind", a.kind, "environment kind")
      ->check(CLI::IsMember({"random", "structured"}))
      ->capture_default_str();
  cmd->add_option("--n", a.n, "instance count")->capture_default_str();
  cmd->add_option("--density", a.density, "obstacle probability per cell (random kind)")
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->add_option("--map", a.map, "fixed map for --kind structured");
  cmd->add_option("--rows", a.rows, "grid rows (random kind)")->capture_default_str();
  cmd->add_option("--cols", a.cols, "grid columns (random kind)")->capture_default_str();
  cmd->add_option("--cell-size", a.cell_size, "cell edge length in m (random kind)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near time-optimal motion planning through grid corridors"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "plan one scenario and export the trajectory");
  plan->add_option("--scenario", plan_args.scenario, "scenario JSON file")->required();
  plan->add_option("--out", plan_args.out, "output directory")->required();
  plan->add_option("--rate", plan_args.rate, "sample rate in Hz")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SuiteArgs bench_args;
  auto* bench = app.add_subcommand("bench", "compare the planner with the OCP baseline");
  add_suite_options(bench, bench_args);
  bench->add_option("--baseline-grid", bench_args.baseline_grid, "OCP points per corridor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--compare-grid", bench_args.compare_grid,
                    "second OCP resolution for the robustness comparison (0 = off)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench->add_option("--jobs", bench_args.jobs, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SuiteArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate benchmark scenarios");
  add_suite_options(gen, gen_args);

  ValidateArgs val_args;
  auto* validate = app.add_subcommand("validate", "check a sampled trajectory");
  validate->add_option("--traj", val_args.traj, "trajectory CSV")->required();
  validate->add_option("--map", val_args.map, "map file")->required();
  validate->add_option("--vehicle", val_args.vehicle, "W,L,vmax,amax")->required();
  validate->add_option("--tol", val_args.tol, "bound tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*plan) return cmd_plan(plan_args);
    if (*bench) return cmd_bench(bench_args);
    if (*gen) return cmd_gen(gen_args);
    if (*validate) return cmd_validate(val_args);
  } catch (const pmp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const pmp::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const pmp::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const pmp::GenerationStuck& e) {
    std::cerr << "generation stuck: " << e.what() << "\n";
    return kStuck;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
