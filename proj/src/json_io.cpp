#include "rbmpc/json_io.hpp"

#include "rbmpc/rng.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace rbmpc {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) {  // scalar promoted to 1x1
    Matrix M(1, 1);
    M(0, 0) = v.get<double>();
    return M;
  }
  if (!v.is_array() || v.empty())
    throw ConfigError("key '" + key + "': expected a scalar or a non-empty list of rows");
  const size_t rows = v.size();
  size_t cols = 0;
  Matrix M;
  for (size_t i = 0; i < rows; ++i) {
    const json& row = v.at(i);
    if (!row.is_array() || row.empty()) {
      std::ostringstream os;
      os << "key '" << key << "', row " << i << ": expected a non-empty list of numbers";
      throw ConfigError(os.str());
    }
    if (i == 0) {
      cols = row.size();
      M.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      std::ostringstream os;
      os << "key '" << key << "', row " << i << ": has " << row.size() << " entries, expected "
         << cols;
      throw ConfigError(os.str());
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!row.at(c).is_number()) {
        std::ostringstream os;
        os << "key '" << key << "', row " << i << ": entry " << c << " is not a number";
        throw ConfigError(os.str());
      }
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row.at(c).get<double>();
    }
  }
  return M;
}

Vector parse_vector(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return Vector::Constant(1, v.get<double>());
  if (!v.is_array() || v.empty())
    throw ConfigError("key '" + key + "': expected a scalar or a non-empty list of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v.at(i).is_number()) {
      std::ostringstream os;
      os << "key '" << key << "', entry " << i << ": not a number";
      throw ConfigError(os.str());
    }
    out(static_cast<Eigen::Index>(i)) = v.at(i).get<double>();
  }
  return out;
}

double parse_positive(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError("missing or non-numeric key '" + key + "'");
  return j.at(key).get<double>();
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("failed to parse " + path + ": " + e.what());
  }
  return j;
}

// Deterministic formatting for reproducible CSV output.
void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

ProblemSetup parse_problem(const json& j) {
  ProblemSetup setup;
  setup.plant.A = parse_matrix(j, "A");
  setup.plant.B = parse_matrix(j, "B");
  setup.Q = parse_matrix(j, "Q");
  setup.R = parse_matrix(j, "R");
  if (!j.contains("N") || !j.at("N").is_number_integer())
    throw ConfigError("missing or non-integer key 'N'");
  setup.N = j.at("N").get<int>();
  setup.epsilon = parse_positive(j, "epsilon");
  setup.delta = parse_positive(j, "delta");
  setup.state_set.C = parse_matrix(j, "Cx");
  setup.state_set.d = parse_vector(j, "dx");
  setup.input_set.C = parse_matrix(j, "Cu");
  setup.input_set.d = parse_vector(j, "du");
  return setup;
}

ProblemSetup load_problem_file(const std::string& path) { return parse_problem(load_json(path)); }

InitMode parse_init_mode(const std::string& name) {
  if (name == "zero") return InitMode::Zero;
  if (name == "gain_rollout") return InitMode::GainRollout;
  if (name == "optimal") return InitMode::Optimal;
  throw ConfigError("unknown init_mode '" + name + "' (zero | gain_rollout | optimal)");
}

SearchMethod parse_method(const std::string& name) {
  if (name == "g" || name == "gradient") return SearchMethod::Gradient;
  if (name == "cg" || name == "conjugate_gradient") return SearchMethod::ConjugateGradient;
  if (name == "n" || name == "newton") return SearchMethod::Newton;
  if (name == "qn" || name == "quasi_newton") return SearchMethod::QuasiNewton;
  throw ConfigError("unknown method '" + name + "' (g | cg | n | qn)");
}

std::string method_name(SearchMethod method) {
  switch (method) {
    case SearchMethod::Gradient: return "gradient";
    case SearchMethod::ConjugateGradient: return "cg";
    case SearchMethod::Newton: return "newton";
    case SearchMethod::QuasiNewton: return "quasi_newton";
  }
  return "?";
}

ExperimentConfig parse_experiment(const json& j, const std::string& base_dir) {
  ExperimentConfig cfg;
  if (!j.contains("problem")) throw ConfigError("missing key 'problem'");
  const json& p = j.at("problem");
  if (p.is_string()) {
    std::filesystem::path path(p.get<std::string>());
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    cfg.problem = load_problem_file(path.string());
  } else {
    cfg.problem = parse_problem(p);
  }

  if (!j.contains("x0")) throw ConfigError("missing key 'x0'");
  const json& x0 = j.at("x0");
  if (x0.is_object()) {
    cfg.x0.random = true;
    if (!x0.contains("seed")) throw ConfigError("x0 random spec requires an explicit 'seed'");
    cfg.x0.seed = x0.at("seed").get<std::uint64_t>();
    cfg.x0.count = x0.at("count").get<int>();
    cfg.x0.lo = parse_vector(x0, "lo");
    cfg.x0.hi = parse_vector(x0, "hi");
    if (cfg.x0.count < 1) throw ConfigError("x0.count must be >= 1");
    if (cfg.x0.lo.size() != cfg.x0.hi.size()) throw ConfigError("x0 box bounds differ in length");
  } else if (x0.is_array() && !x0.empty() && x0.front().is_array()) {
    for (const auto& point : x0) {
      Vector v(static_cast<Eigen::Index>(point.size()));
      for (size_t i = 0; i < point.size(); ++i) v(static_cast<Eigen::Index>(i)) = point.at(i).get<double>();
      cfg.x0.points.push_back(std::move(v));
    }
  } else {
    cfg.x0.points.push_back(parse_vector(j, "x0"));
  }

  if (j.contains("init_mode")) cfg.init_mode = parse_init_mode(j.at("init_mode").get<std::string>());
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s.is_number_integer()) {
      cfg.schedule = IterationSchedule::fixed(s.get<int>());
    } else if (s.is_array()) {
      std::vector<int> counts;
      for (const auto& e : s) counts.push_back(e.get<int>());
      cfg.schedule = IterationSchedule::per_step(std::move(counts));
    } else {
      throw ConfigError("schedule: expected an integer or a list of integers");
    }
  }
  if (j.contains("line_search")) {
    const json& ls = j.at("line_search");
    if (ls.contains("method")) cfg.ls.method = parse_method(ls.at("method").get<std::string>());
    if (ls.contains("c1")) cfg.ls.c1 = ls.at("c1").get<double>();
    if (ls.contains("c2")) cfg.ls.c2 = ls.at("c2").get<double>();
    if (ls.contains("rho")) cfg.ls.rho = ls.at("rho").get<double>();
    if (ls.contains("s_init")) cfg.ls.s_init = ls.at("s_init").get<double>();
    if (ls.contains("max_ls_iters")) cfg.ls.max_ls_iters = ls.at("max_ls_iters").get<int>();
    if (!(cfg.ls.c1 > 0.0 && cfg.ls.c1 < cfg.ls.c2 && cfg.ls.c2 < 1.0))
      throw ConfigError("line_search: require 0 < c1 < c2 < 1");
    if (!(cfg.ls.rho > 0.0 && cfg.ls.rho < 1.0)) throw ConfigError("line_search: require 0 < rho < 1");
  }
  if (j.contains("sim_steps")) cfg.sim.sim_steps = j.at("sim_steps").get<int>();
  if (cfg.sim.sim_steps < 1) throw ConfigError("sim_steps must be >= 1");
  if (j.contains("certificates")) cfg.sim.certificates = j.at("certificates").get<bool>();
  if (j.contains("stop_cost")) cfg.sim.stop_cost = j.at("stop_cost").get<double>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("prefix")) cfg.prefix = j.at("prefix").get<std::string>();
  return cfg;
}

ExperimentConfig load_experiment_file(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_experiment(load_json(path), dir.empty() ? "." : dir);
}

std::vector<Vector> resolve_initial_states(const X0Spec& spec) {
  if (!spec.random) return spec.points;
  Rng rng(spec.seed);
  std::vector<Vector> points;
  points.reserve(static_cast<size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) points.push_back(rng.uniform_vector(spec.lo, spec.hi));
  return points;
}

void write_trajectory_csv(std::ostream& os, const CondensedProblem& cp, const TrajectoryLog& log) {
  const bool certs = !log.steps.empty() && log.steps.front().zx.size() > 0;
  os << "k";
  for (int i = 1; i <= cp.n(); ++i) os << ",x_" << i;
  for (int i = 1; i <= cp.m(); ++i) os << ",u_" << i;
  os << ",cost,grad_norm";
  if (certs) {
    os << ",alpha_hat";
    for (int i = 1; i <= cp.setup.state_set.rows(); ++i) os << ",zx_" << i;
    for (int i = 1; i <= cp.setup.input_set.rows(); ++i) os << ",zu_" << i;
  }
  os << ",ls_iters,gamma\n";
  for (size_t k = 0; k < log.steps.size(); ++k) {
    const StepRecord& rec = log.steps[k];
    os << k;
    for (int i = 0; i < rec.x.size(); ++i) { os << ','; put(os, rec.x(i)); }
    for (int i = 0; i < rec.u.size(); ++i) { os << ','; put(os, rec.u(i)); }
    os << ','; put(os, rec.cost);
    os << ','; put(os, rec.grad_norm);
    if (certs) {
      os << ','; put(os, rec.alpha);
      for (int i = 0; i < rec.zx.size(); ++i) { os << ','; put(os, rec.zx(i)); }
      for (int i = 0; i < rec.zu.size(); ++i) { os << ','; put(os, rec.zu(i)); }
    }
    os << ',' << rec.ls_iters;
    os << ','; put(os, rec.gamma);
    os << '\n';
  }
}

void write_compare_csv(std::ostream& os, const CompareSummary& summary) {
  os << "k";
  for (const auto& label : summary.labels) os << ',' << label;
  os << '\n';
  const size_t steps = summary.mean_cost.empty() ? 0 : summary.mean_cost.front().size();
  for (size_t k = 0; k < steps; ++k) {
    os << k;
    for (const auto& curve : summary.mean_cost) { os << ','; put(os, curve[k]); }
    os << '\n';
  }
}

void dump_condensed_json(std::ostream& os, const CondensedProblem& cp) {
  auto matrix_to_json = [](const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json j;
  j["H"] = matrix_to_json(cp.H);
  j["F"] = matrix_to_json(cp.F);
  j["Y"] = matrix_to_json(cp.Y);
  j["G"] = matrix_to_json(cp.G);
  j["E"] = matrix_to_json(cp.E);
  json d = json::array();
  for (Eigen::Index i = 0; i < cp.dbar.size(); ++i) d.push_back(cp.dbar(i));
  j["dbar"] = std::move(d);
  j["sigma"] = cp.sigma;
  j["L"] = cp.L;
  os << j.dump(1) << '\n';
}

}  // namespace rbmpc
