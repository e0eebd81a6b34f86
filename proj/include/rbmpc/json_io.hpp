#pragma once

#include "rbmpc/simulate.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbmpc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Initial-condition source: explicit point(s) or a seeded uniform sample
/// from a bounding box.
struct X0Spec {
  std::vector<Vector> points;
  bool random = false;
  int count = 0;
  Vector lo, hi;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  ProblemSetup problem;
  X0Spec x0;
  InitMode init_mode = InitMode::GainRollout;
  IterationSchedule schedule = IterationSchedule::fixed(1);
  LineSearchConfig ls;
  SimOptions sim;
  std::string output_dir = ".";
  std::string prefix = "run";
};

/// Problem JSON keys: A, B, Q, R (matrices as row-lists, scalars promoted
/// to 1x1), N, epsilon, delta, Cx, dx, Cu, du. Errors name the offending
/// key and row.
ProblemSetup parse_problem(const nlohmann::json& j);
ProblemSetup load_problem_file(const std::string& path);

ExperimentConfig parse_experiment(const nlohmann::json& j, const std::string& base_dir);
ExperimentConfig load_experiment_file(const std::string& path);

std::vector<Vector> resolve_initial_states(const X0Spec& spec);

InitMode parse_init_mode(const std::string& name);
SearchMethod parse_method(const std::string& name);
std::string method_name(SearchMethod method);

/// CSV schema: k, x_1..x_n, u_1..u_m, cost, grad_norm,
/// [alpha_hat, zx_1..zx_qx, zu_1..zu_qu,] ls_iters, gamma.
void write_trajectory_csv(std::ostream& os, const CondensedProblem& cp, const TrajectoryLog& log);

void write_compare_csv(std::ostream& os, const CompareSummary& summary);

/// Matrix dump (H, F, Y, G, E, dbar) for external verification.
void dump_condensed_json(std::ostream& os, const CondensedProblem& cp);

}  // namespace rbmpc
