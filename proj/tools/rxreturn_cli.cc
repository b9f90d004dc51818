// Copyright 2026 The rxreturn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   rxreturn validate DIR
//   rxreturn solve DIR [--theta T] [--level L] [-o report.json] [--assignments a.csv]
//   rxreturn sweep DIR --thetas 0.5,0.8,1 --levels low,medium,high [-o sweep.csv]
//   rxreturn oracle DIR
//   rxreturn generate OUT --sites 6 --zones 3 --profiles 2
//
// Exit codes: 0 success, 1 other failure, 2 invalid input, 3 oracle guard,
// 4 iteration limit reached with a nonzero gap.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rxreturn/rxreturn.hpp"

namespace {

namespace fs = std::filesystem;
using rxreturn::Error;
using rxreturn::ErrorCode;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIterationLimit = 4;

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::MissingColumn:
    case ErrorCode::UnknownId:
    case ErrorCode::NegativeValue:
    case ErrorCode::UnitMismatch:
    case ErrorCode::DuplicateId:
    case ErrorCode::InvalidValue:
      return true;
    default:
      return false;
  }
}

int exit_code_for(const Error& e) {
  if (e.code() == ErrorCode::TooManySites) return kExitGuard;
  if (is_input_error(e.code())) return kExitInvalid;
  return kExitFailure;
}

nlohmann::json error_json(const Error& e) {
  return {{"valid", false},
          {"errors", nlohmann::json::array({{{"code", rxreturn::to_string(e.code())},
                                             {"message", e.detail()}}})}};
}

struct GlobalFlags {
  double eps = 1e-6;
  std::size_t max_iter = 500;
  std::size_t workers = 0;  // 0: one per hardware thread
  std::uint64_t seed = 42;
};

// Instance location: a directory holding the standard file names, with
// optional per-file overrides.
struct InputPaths {
  std::string dir;
  std::string sites, zones, profiles, quantities, distances, scenario;

  void add_to(CLI::App* app) {
    app->add_option("dir", dir, "Instance directory")->required();
    app->add_option("--sites-csv", sites, "Override sites.csv");
    app->add_option("--zones-csv", zones, "Override zones.csv");
    app->add_option("--profiles-csv", profiles, "Override profiles.csv");
    app->add_option("--quantities-csv", quantities, "Override quantities.csv");
    app->add_option("--distances-csv", distances, "Override distances.csv");
    app->add_option("--scenario-json", scenario, "Override scenario.json");
  }

  rxreturn::InstanceFiles files() const {
    auto f = rxreturn::InstanceFiles::in_directory(dir);
    if (!sites.empty()) f.sites = sites;
    if (!zones.empty()) f.zones = zones;
    if (!profiles.empty()) f.profiles = profiles;
    if (!quantities.empty()) f.quantities = quantities;
    if (!distances.empty()) f.distances = distances;
    if (!scenario.empty()) f.scenario = scenario;
    return f;
  }
};

struct ScenarioOverrides {
  std::optional<double> theta, penalty, pills, mileage_rate;
  std::optional<std::string> level;

  void add_to(CLI::App* app) {
    app->add_option("--theta", theta, "Target fraction of unused pills");
    app->add_option("--level", level, "Incentive level");
    app->add_option("--penalty", penalty, "Penalty per unreturned prescription");
    app->add_option("--pills-per-prescription", pills, "Pills per prescription");
    app->add_option("--mileage-rate", mileage_rate, "Travel cost per mile");
  }

  rxreturn::Instance apply(const rxreturn::Instance& inst) const {
    auto sc = inst.scenario;
    if (theta) sc.theta = *theta;
    if (level) sc.incentive_level = *level;
    if (penalty) sc.penalty_per_prescription = *penalty;
    if (pills) sc.pills_per_prescription = *pills;
    if (mileage_rate) sc.mileage_rate = *mileage_rate;
    return rxreturn::with_scenario(inst, sc);
  }
};

rxreturn::BendersOptions benders_options(const GlobalFlags& g) {
  rxreturn::BendersOptions opt;
  opt.eps = g.eps;
  opt.max_iter = g.max_iter;
  return opt;
}

std::string money(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path);
  return out;
}

int run_validate(const InputPaths& in) {
  const auto inst = rxreturn::load_instance(in.files());
  std::cout << inst.num_sites() << " sites, " << inst.num_zones() << " zones, "
            << inst.num_profiles() << " profiles\n";
  double capacity = 0.0, fixed = 0.0;
  for (const auto& s : inst.sites) {
    capacity += s.capacity;
    fixed += s.fixed_cost;
  }
  std::cout << "unused pills: " << rxreturn::detail::format_number(rxreturn::total_unused(inst))
            << "\nkiosk capacity: " << rxreturn::detail::format_number(capacity)
            << "\nfixed cost if all open: " << money(fixed) << '\n';
  std::cout << "reachability density:";
  for (const auto& level : inst.level_policy.levels) {
    auto sc = inst.scenario;
    sc.incentive_level = level;
    const auto dp = rxreturn::derive_params(rxreturn::with_scenario(inst, sc));
    std::size_t reach = 0;
    for (auto a : dp.reachable.flat()) reach += a;
    const double density = dp.reachable.size() ? double(reach) / double(dp.reachable.size()) : 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, " %s=%.3f", level.c_str(), density);
    std::cout << buf;
  }
  std::cout << '\n';
  return kExitOk;
}

struct SolveOutputs {
  std::string report, assignments, quantities, trace;
};

int run_solve(const InputPaths& in, const ScenarioOverrides& ov, const SolveOutputs& out,
              const GlobalFlags& g) {
  const auto inst = ov.apply(rxreturn::load_instance(in.files()));
  const auto rep = rxreturn::solve(inst, benders_options(g));
  const auto json = rxreturn::to_json(inst, rep);
  if (!out.report.empty()) {
    auto f = open_output(out.report);
    f << json.dump(2) << '\n';
  }
  if (!out.assignments.empty()) {
    auto f = open_output(out.assignments);
    rxreturn::write_assignments_csv(f, inst, rep);
  }
  if (!out.quantities.empty()) {
    auto f = open_output(out.quantities);
    rxreturn::write_quantities_csv(f, inst, rep);
  }
  if (!out.trace.empty()) {
    auto f = open_output(out.trace);
    rxreturn::write_trace_jsonl(f, rep);
  }

  std::cout << "theta " << inst.scenario.theta << ", level " << inst.scenario.incentive_level
            << '\n';
  std::cout << "termination: " << rxreturn::to_string(rep.termination) << " after "
            << rep.iterations << " iterations, gap " << rep.gap << '\n';
  std::cout << "opened " << rep.opened.size() << " kiosks:";
  for (auto i : rep.opened) std::cout << ' ' << inst.sites[i].id;
  std::cout << '\n';
  std::cout << "fixed " << money(rep.cost.fixed) << "  incentive " << money(rep.cost.incentive)
            << "  penalty " << money(rep.cost.penalty) << "  total " << money(rep.cost.total)
            << '\n';
  if (!rep.converged() && rep.gap > 0.0) return kExitIterationLimit;
  return kExitOk;
}

int run_sweep(const InputPaths& in, const std::vector<double>& thetas,
              const std::vector<std::string>& levels, const std::string& output,
              const GlobalFlags& g) {
  const auto inst = rxreturn::load_instance(in.files());
  // Reject unknown levels and bad thetas up front rather than per cell.
  for (const auto& l : levels) {
    if (!inst.level_policy.find(l)) {
      throw Error(ErrorCode::InvalidValue, "incentive level '" + l + "' is not declared");
    }
  }
  for (double t : thetas) {
    auto sc = inst.scenario;
    sc.theta = t;
    rxreturn::validate_scenario(sc, inst.level_policy);
  }
  std::size_t workers = g.workers ? g.workers : std::max(1u, std::thread::hardware_concurrency());
  const auto sweep = rxreturn::run_sweep(inst, thetas, levels, benders_options(g), workers);
  if (output.empty() || output == "-") {
    rxreturn::write_sweep_csv(std::cout, sweep);
  } else {
    auto f = open_output(output);
    rxreturn::write_sweep_csv(f, sweep);
  }
  bool failed = false, unconverged = false;
  for (const auto& c : sweep.cells) {
    if (!c.ok) {
      failed = true;
      std::cerr << "cell theta=" << c.theta << " level=" << c.level << " failed: " << c.error
                << '\n';
    } else if (!c.converged && c.gap > 0.0) {
      unconverged = true;
    }
  }
  if (failed) return kExitFailure;
  return unconverged ? kExitIterationLimit : kExitOk;
}

int run_oracle(const InputPaths& in, const ScenarioOverrides& ov, std::size_t max_sites,
               const GlobalFlags& g) {
  const auto inst = ov.apply(rxreturn::load_instance(in.files()));
  const auto dp = rxreturn::derive_params(inst);
  rxreturn::OracleOptions oo;
  oo.max_sites = max_sites;
  const auto oracle = rxreturn::oracle_solve(inst, dp, oo);
  const auto benders = rxreturn::benders_solve(inst, dp, benders_options(g));
  const double gap =
      std::abs(benders.upper_bound - oracle.objective) / std::max(1.0, std::abs(oracle.objective));
  nlohmann::json rec = {{"oracle_objective", oracle.objective},
                        {"benders_objective", benders.upper_bound},
                        {"relative_gap", gap},
                        {"benders_termination", rxreturn::to_string(benders.termination)},
                        {"benders_iterations", benders.trace.size()}};
  std::cout << rec.dump(2) << '\n';
  return gap <= 1e-6 ? kExitOk : kExitFailure;
}

int run_generate(const std::string& outdir, rxreturn::GeneratorConfig cfg, const GlobalFlags& g) {
  cfg.seed = g.seed;
  const auto inst = rxreturn::generate_instance(cfg);
  rxreturn::write_instance(outdir, inst);
  std::cout << "wrote " << inst.num_sites() << " sites, " << inst.num_zones() << " zones, "
            << inst.num_profiles() << " profiles to " << outdir << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kiosk location and return-incentive planning"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--eps", g.eps, "Relative gap tolerance")->capture_default_str();
  app.add_option("--max-iter", g.max_iter, "Decomposition iteration limit")
      ->capture_default_str();
  app.add_option("--workers", g.workers, "Sweep worker threads (0: hardware threads)");
  app.add_option("--seed", g.seed, "Generator seed")->capture_default_str();

  InputPaths validate_in, solve_in, sweep_in, oracle_in;
  ScenarioOverrides solve_ov, oracle_ov;

  auto* validate = app.add_subcommand("validate", "Check instance files and summarize them");
  validate_in.add_to(validate);

  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  solve_in.add_to(solve);
  solve_ov.add_to(solve);
  SolveOutputs outputs;
  solve->add_option("-o,--output", outputs.report, "Report JSON path");
  solve->add_option("--assignments", outputs.assignments, "Assignment CSV path");
  solve->add_option("--quantities", outputs.quantities, "Returned/unreturned CSV path");
  solve->add_option("--trace", outputs.trace, "Bound trace JSONL path");

  auto* sweep = app.add_subcommand("sweep", "Solve a theta x level grid");
  sweep_in.add_to(sweep);
  std::vector<double> thetas{0.5, 0.8, 1.0};
  std::vector<std::string> levels;
  std::string sweep_out;
  sweep->add_option("--thetas", thetas, "Comma-separated theta values")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--levels", levels, "Comma-separated levels (default: all)")->delimiter(',');
  sweep->add_option("-o,--output", sweep_out, "CSV path (default: stdout)");

  auto* oracle = app.add_subcommand("oracle", "Compare the decomposition with enumeration");
  oracle_in.add_to(oracle);
  oracle_ov.add_to(oracle);
  std::size_t max_sites = 20;
  oracle->add_option("--max-sites", max_sites, "Enumeration guard")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Write a seeded random instance");
  std::string gen_out;
  rxreturn::GeneratorConfig cfg;
  generate->add_option("outdir", gen_out, "Output directory")->required();
  generate->add_option("--sites", cfg.sites)->capture_default_str();
  generate->add_option("--zones", cfg.zones)->capture_default_str();
  generate->add_option("--profiles", cfg.profiles)->capture_default_str();
  generate->add_option("--region-miles", cfg.region_miles)->capture_default_str();
  generate->add_option("--fixed-cost-min", cfg.fixed_cost_min)->capture_default_str();
  generate->add_option("--fixed-cost-max", cfg.fixed_cost_max)->capture_default_str();
  generate->add_option("--capacity-min", cfg.capacity_min)->capture_default_str();
  generate->add_option("--capacity-max", cfg.capacity_max)->capture_default_str();
  generate->add_option("--quantity-min", cfg.quantity_min)->capture_default_str();
  generate->add_option("--quantity-max", cfg.quantity_max)->capture_default_str();
  generate->add_option("--reserve-min", cfg.reserve_min)->capture_default_str();
  generate->add_option("--reserve-max", cfg.reserve_max)->capture_default_str();
  generate->add_option("--theta", cfg.scenario.theta)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return run_validate(validate_in);
    if (*solve) return run_solve(solve_in, solve_ov, outputs, g);
    if (*sweep) {
      if (levels.empty()) {
        levels = rxreturn::read_scenario(sweep_in.files().scenario).policy.levels;
      }
      return run_sweep(sweep_in, thetas, levels, sweep_out, g);
    }
    if (*oracle) return run_oracle(oracle_in, oracle_ov, max_sites, g);
    if (*generate) return run_generate(gen_out, cfg, g);
  } catch (const Error& e) {
    if (is_input_error(e.code())) {
      std::cout << error_json(e).dump(2) << '\n';
    } else {
      std::cerr << "error: " << e.what() << '\n';
    }
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
