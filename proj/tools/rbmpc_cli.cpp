// Command-line front end: problem checking, closed-loop simulation, method
// comparison and standalone certificate computation.

#include "rbmpc/json_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace rbmpc;

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("failed to parse " + path + ": " + e.what());
  }
  return j;
}

// Accepts either an experiment config (with a "problem" key) or a bare
// problem description.
ExperimentConfig load_any_config(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  const std::string dir = std::filesystem::path(path).parent_path().string();
  if (j.contains("problem")) return parse_experiment(j, dir.empty() ? "." : dir);
  ExperimentConfig cfg;
  cfg.problem = parse_problem(j);
  cfg.x0.points.push_back(Vector::Zero(cfg.problem.plant.n()));
  return cfg;
}

CondensedProblem build_or_throw(const ProblemSetup& setup) {
  const ValidationReport report = validate_setup(setup);
  if (!report.ok()) throw ConfigError("invalid problem setup:\n" + report.to_string());
  return assemble(setup);
}

int run_check(const std::string& config_path, const std::string& dump_path) {
  ExperimentConfig cfg = load_any_config(config_path);
  CondensedProblem cp = build_or_throw(cfg.problem);
  std::cout << "problem ok\n"
            << "  n = " << cp.n() << ", m = " << cp.m() << ", N = " << cp.N() << "\n"
            << "  q = " << cp.q() << " stacked constraint rows\n"
            << "  sigma = " << cp.sigma << "\n"
            << "  L = " << cp.L << "\n";
  if (!dump_path.empty()) {
    std::ofstream out(dump_path);
    if (!out) throw ConfigError("cannot write matrix dump: " + dump_path);
    dump_condensed_json(out, cp);
    std::cout << "  matrices dumped to " << dump_path << "\n";
  }
  return 0;
}

int run_simulate(const ExperimentConfig& cfg) {
  CondensedProblem cp = build_or_throw(cfg.problem);
  const std::vector<Vector> x0s = resolve_initial_states(cfg.x0);
  if (x0s.empty()) throw ConfigError("no initial states specified");
  std::filesystem::create_directories(cfg.output_dir);

  nlohmann::json summary;
  summary["trajectories"] = x0s.size();
  auto& runs = summary["runs"];
  runs = nlohmann::json::array();
  for (size_t i = 0; i < x0s.size(); ++i) {
    TrajectoryLog log =
        simulate_trajectory(cp, x0s[i], cfg.init_mode, cfg.schedule, cfg.ls, cfg.sim);
    const std::string csv_path =
        (std::filesystem::path(cfg.output_dir) / (cfg.prefix + "_traj_" + std::to_string(i) + ".csv"))
            .string();
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot write " + csv_path);
    write_trajectory_csv(out, cp, log);

    nlohmann::json run;
    run["csv"] = csv_path;
    run["steps"] = log.steps.size();
    run["final_cost"] = log.steps.back().cost;
    run["settled_step"] = log.settled_step;
    run["worst_violation"] = worst_violation(cp, log);
    runs.push_back(std::move(run));
    std::cout << "wrote " << csv_path << " (" << log.steps.size() << " steps)\n";
  }
  const std::string summary_path =
      (std::filesystem::path(cfg.output_dir) / (cfg.prefix + "_summary.json")).string();
  std::ofstream out(summary_path);
  out << summary.dump(1) << '\n';
  std::cout << "wrote " << summary_path << "\n";
  return 0;
}

int run_compare(const ExperimentConfig& cfg, const std::string& methods_arg) {
  CondensedProblem cp = build_or_throw(cfg.problem);
  const std::vector<Vector> x0s = resolve_initial_states(cfg.x0);
  if (x0s.empty()) throw ConfigError("no initial states specified");

  std::vector<RunSpec> runs;
  std::stringstream ss(methods_arg);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token == "shift") {
      RunSpec spec{"shift_only", cfg.ls, IterationSchedule::fixed(0), cfg.init_mode};
      runs.push_back(std::move(spec));
      continue;
    }
    RunSpec spec;
    spec.ls = cfg.ls;
    spec.ls.method = parse_method(token);
    spec.label = method_name(spec.ls.method);
    spec.schedule = cfg.schedule;
    spec.init = cfg.init_mode;
    runs.push_back(std::move(spec));
  }
  if (runs.empty()) throw ConfigError("no methods given");

  const CompareSummary summary = compare_methods(cp, runs, x0s, cfg.sim.sim_steps);
  std::filesystem::create_directories(cfg.output_dir);
  const std::string csv_path =
      (std::filesystem::path(cfg.output_dir) / (cfg.prefix + "_mean_cost.csv")).string();
  std::ofstream out(csv_path);
  if (!out) throw ConfigError("cannot write " + csv_path);
  write_compare_csv(out, summary);
  std::cout << "wrote " << csv_path << " (" << x0s.size() << " initial conditions per curve)\n";
  return 0;
}

int run_certify(const ExperimentConfig& cfg) {
  CondensedProblem cp = build_or_throw(cfg.problem);
  const std::vector<Vector> x0s = resolve_initial_states(cfg.x0);
  if (x0s.empty()) throw ConfigError("no initial states specified");

  const BoundaryLevels levels = beta_bar(cp.barrier_x, cp.barrier_u);
  nlohmann::json out;
  out["beta_x"] = levels.beta_x;
  out["beta_u"] = levels.beta_u;
  out["beta"] = levels.beta;
  auto& entries = out["initializations"];
  entries = nlohmann::json::array();
  for (const Vector& x0 : x0s) {
    ControllerState state = initialize(cfg.init_mode, x0, cp);
    const double alpha = alpha_hat(cp, state.U, x0);
    nlohmann::json e;
    e["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
    e["alpha_hat"] = alpha;
    e["member"] = z_n_membership(cp, levels.beta, state.U, x0);
    const Vector zx = violation_bounds(cp.barrier_x, cp.epsilon, alpha);
    const Vector zu = violation_bounds(cp.barrier_u, cp.epsilon, alpha);
    e["zx"] = std::vector<double>(zx.data(), zx.data() + zx.size());
    e["zu"] = std::vector<double>(zu.data(), zu.data() + zu.size());
    entries.push_back(std::move(e));
  }
  std::cout << out.dump(1) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaxed-barrier MPC iteration scheme"};
  app.require_subcommand(1);

  std::string config_path, out_dir, dump_path;
  std::string methods = "g,cg,n,qn,shift";
  std::string schedule_arg, method_arg;
  std::uint64_t seed = 0;
  bool seed_set = false, schedule_set = false, method_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config path")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option_function<std::uint64_t>(
           "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; }, "override x0 sample seed");
    cmd->add_option_function<std::string>(
           "--schedule", [&](const std::string& v) { schedule_arg = v; schedule_set = true; },
           "override schedule: int or comma list");
    cmd->add_option_function<std::string>(
           "--method", [&](const std::string& v) { method_arg = v; method_set = true; },
           "override line-search method: g|cg|n|qn");
  };

  CLI::App* check = app.add_subcommand("check", "validate a problem and report sigma/L");
  check->add_option("--config", config_path, "JSON config path")->required();
  check->add_option("--dump", dump_path, "write condensed matrices to this JSON file");

  CLI::App* simulate = app.add_subcommand("simulate", "closed-loop simulation, one CSV per x0");
  add_common(simulate);
  CLI::App* compare = app.add_subcommand("compare", "mean cost curves for several methods");
  add_common(compare);
  compare->add_option("--methods", methods, "comma list from g,cg,n,qn,shift");
  CLI::App* certify = app.add_subcommand("certify", "beta levels and violation bounds for (U0,x0)");
  add_common(certify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(check)) return run_check(config_path, dump_path);

    rbmpc::ExperimentConfig cfg = load_any_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed_set) {
      if (!cfg.x0.random) throw rbmpc::ConfigError("--seed given but x0 is not a random spec");
      cfg.x0.seed = seed;
    }
    if (schedule_set) {
      if (schedule_arg.find(',') == std::string::npos) {
        cfg.schedule = rbmpc::IterationSchedule::fixed(std::stoi(schedule_arg));
      } else {
        std::vector<int> counts;
        std::stringstream ss(schedule_arg);
        std::string token;
        while (std::getline(ss, token, ',')) counts.push_back(std::stoi(token));
        cfg.schedule = rbmpc::IterationSchedule::per_step(std::move(counts));
      }
    }
    if (method_set) cfg.ls.method = rbmpc::parse_method(method_arg);

    if (app.got_subcommand(simulate)) return run_simulate(cfg);
    if (app.got_subcommand(compare)) return run_compare(cfg, methods);
    if (app.got_subcommand(certify)) return run_certify(cfg);
  } catch (const rbmpc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
