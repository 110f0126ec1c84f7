#include "hblab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hblab/csv.hpp"
#include "hblab/rng.hpp"
#include "json.hpp"

namespace hblab {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::string require_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

Vec require_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(require_number(e, where + " element"));
  return v;
}

ProblemConfig parse_problem(const json& j) {
  if (!j.is_object()) throw ConfigError("problem: expected an object");
  ProblemConfig p;
  if (!j.contains("kind")) throw ConfigError("problem.kind: missing");
  p.kind = require_string(j.at("kind"), "problem.kind");
  if (p.kind != "diagonal-quadratic" && p.kind != "nonconvex-pl")
    throw ConfigError("problem.kind: unknown kind '" + p.kind + "'");
  if (j.contains("eigenvalues")) {
    p.eigenvalues = require_vector(j.at("eigenvalues"), "problem.eigenvalues");
    if (p.eigenvalues.empty())
      throw ConfigError("problem.eigenvalues: must not be empty");
  }
  if (j.contains("mu")) p.mu = require_number(j.at("mu"), "problem.mu");
  if (j.contains("L")) p.L = require_number(j.at("L"), "problem.L");
  if (j.contains("dim")) p.dim = require_int(j.at("dim"), "problem.dim");
  if (j.contains("spectrum-rule"))
    p.spectrum_rule = require_string(j.at("spectrum-rule"), "problem.spectrum-rule");
  return p;
}

MethodConfig parse_method(const json& j) {
  if (!j.is_object()) throw ConfigError("method: expected an object");
  MethodConfig m;
  if (!j.contains("params")) throw ConfigError("method.params: missing");
  m.params = require_string(j.at("params"), "method.params");
  if (m.params != "explicit" && m.params != "optimal" &&
      m.params != "theorem2-feasible" && m.params != "theorem3-feasible")
    throw ConfigError("method.params: unknown selection '" + m.params + "'");
  if (j.contains("alpha")) m.alpha = require_number(j.at("alpha"), "method.alpha");
  if (j.contains("beta")) m.beta = require_number(j.at("beta"), "method.beta");
  if (m.params == "explicit" && (!m.alpha || !m.beta))
    throw ConfigError("method: explicit params need alpha and beta");
  return m;
}

InitConfig parse_init(const json& j) {
  if (!j.is_object()) throw ConfigError("init: expected an object");
  InitConfig init;
  int styles = 0;
  if (j.contains("standard-from")) {
    init.style = "standard-from";
    init.standard_from = require_vector(j.at("standard-from"), "init.standard-from");
    ++styles;
  }
  if (j.contains("pair")) {
    init.style = "pair";
    const auto& p = j.at("pair");
    if (!p.is_object() || !p.contains("x0") || !p.contains("x1"))
      throw ConfigError("init.pair: expected {x0, x1}");
    init.x0 = require_vector(p.at("x0"), "init.pair.x0");
    init.x1 = require_vector(p.at("x1"), "init.pair.x1");
    ++styles;
  }
  if (j.contains("named")) {
    init.style = "named";
    init.named = require_string(j.at("named"), "init.named");
    if (init.named != "worst-case-e1" && init.named != "worst-case-en" &&
        init.named != "zeros-ones")
      throw ConfigError("init.named: unknown name '" + init.named + "'");
    ++styles;
  }
  if (styles != 1)
    throw ConfigError("init: exactly one of standard-from, pair, named");
  return init;
}

RestartPolicy parse_policy(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string kind = j.get<std::string>();
    if (kind == "none") return NoRestart{};
    if (kind == "function") return FunctionScheme{};
    if (kind == "gradient") return GradientScheme{};
    if (kind == "lyapunov") return LyapunovScheme{};
    throw ConfigError(where + ": unknown policy '" + kind + "'");
  }
  if (j.is_object()) {
    if (!j.contains("kind")) throw ConfigError(where + ".kind: missing");
    const std::string kind = require_string(j.at("kind"), where + ".kind");
    if (kind == "fixed-interval") {
      if (!j.contains("period")) throw ConfigError(where + ".period: missing");
      const int period = require_int(j.at("period"), where + ".period");
      if (period < 2) throw ConfigError(where + ".period: must be >= 2");
      return FixedInterval{period};
    }
    return parse_policy(json(kind), where);
  }
  throw ConfigError(where + ": expected a string or an object");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig cfg;
  if (j.contains("command"))
    cfg.command = require_string(j.at("command"), "command");
  if (!j.contains("problem")) throw ConfigError("problem: missing");
  cfg.problem = parse_problem(j.at("problem"));
  if (!j.contains("method")) throw ConfigError("method: missing");
  cfg.method = parse_method(j.at("method"));
  if (!j.contains("init")) throw ConfigError("init: missing");
  cfg.init = parse_init(j.at("init"));
  if (j.contains("run")) {
    const auto& r = j.at("run");
    if (!r.is_object()) throw ConfigError("run: expected an object");
    if (r.contains("max_iters")) {
      cfg.run.max_iters = require_int(r.at("max_iters"), "run.max_iters");
      if (cfg.run.max_iters < 1) throw ConfigError("run.max_iters: must be >= 1");
    }
    if (r.contains("grad_tol")) {
      cfg.run.grad_tol = require_number(r.at("grad_tol"), "run.grad_tol");
      if (!(*cfg.run.grad_tol > 0.0))
        throw ConfigError("run.grad_tol: must be > 0");
    }
  }
  if (j.contains("policy")) cfg.policy = parse_policy(j.at("policy"), "policy");
  if (j.contains("policies")) {
    const auto& ps = j.at("policies");
    if (!ps.is_array() || ps.empty())
      throw ConfigError("policies: expected a non-empty array");
    for (std::size_t i = 0; i < ps.size(); ++i)
      cfg.policies.push_back(
          parse_policy(ps.at(i), "policies[" + std::to_string(i) + "]"));
  }
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    if (!o.is_object()) throw ConfigError("outputs: expected an object");
    if (o.contains("csv_path"))
      cfg.outputs.csv_path = require_string(o.at("csv_path"), "outputs.csv_path");
    if (o.contains("fields")) {
      if (!o.at("fields").is_array())
        throw ConfigError("outputs.fields: expected an array");
      cfg.outputs.fields.clear();
      for (const auto& f : o.at("fields")) {
        const std::string name = require_string(f, "outputs.fields element");
        if (!is_trajectory_field(name))
          throw ConfigError("outputs.fields: unknown field '" + name + "'");
        cfg.outputs.fields.push_back(name);
      }
      if (cfg.outputs.fields.empty())
        throw ConfigError("outputs.fields: must not be empty");
    }
  }
  if (j.contains("L0")) {
    cfg.L0 = require_number(j.at("L0"), "L0");
    if (!(*cfg.L0 > 0.0)) throw ConfigError("L0: must be > 0");
  }
  if (j.contains("eps")) {
    cfg.eps = require_number(j.at("eps"), "eps");
    if (!(cfg.eps > 0.0)) throw ConfigError("eps: must be > 0");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ConfigError("seed: expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  return cfg;
}

PeakConfig parse_peak_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  PeakConfig cfg;
  if (j.contains("rho")) cfg.rho = require_number(j.at("rho"), "rho");
  if (j.contains("a1")) cfg.a1 = require_number(j.at("a1"), "a1");
  if (j.contains("a2")) cfg.a2 = require_number(j.at("a2"), "a2");
  if (j.contains("x0")) cfg.x0 = require_number(j.at("x0"), "x0");
  if (j.contains("x1")) cfg.x1 = require_number(j.at("x1"), "x1");
  if (j.contains("k")) {
    cfg.K = require_int(j.at("k"), "k");
    if (cfg.K < 1) throw ConfigError("k: must be >= 1");
  }
  const bool has_rho = cfg.rho.has_value();
  const bool has_coeffs = cfg.a1.has_value() && cfg.a2.has_value();
  if (has_rho == has_coeffs)
    throw ConfigError("peak: give either rho or both a1 and a2");
  return cfg;
}

std::string detect_config_command(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    if (j.is_object() && j.contains("command") && j.at("command").is_string())
      return j.at("command").get<std::string>();
  } catch (const json::parse_error&) {
  }
  return "";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vec log_uniform_spectrum(double mu, double L, int dim, std::uint64_t seed) {
  if (!(mu > 0.0) || !(L >= mu))
    throw ConfigError("spectrum: need 0 < mu <= L");
  if (dim < 2) throw ConfigError("spectrum: dim must be >= 2");
  Vec eig;
  eig.reserve(static_cast<std::size_t>(dim));
  eig.push_back(mu);
  Rng rng(seed);
  for (int i = 0; i < dim - 2; ++i) eig.push_back(rng.log_uniform(mu, L));
  eig.push_back(L);
  std::sort(eig.begin(), eig.end());
  return eig;
}

BuiltProblem build_objective(const ProblemConfig& cfg, std::uint64_t seed) {
  BuiltProblem built;
  if (cfg.kind == "nonconvex-pl") {
    auto obj = std::make_unique<NonconvexPL>();
    built.L = *obj->L_hint();
    // Certify the gradient-domination constant on the default working box.
    built.mu = certify_pl_constant(*obj, -20.0, 20.0, 100000);
    built.objective = std::move(obj);
    return built;
  }
  // diagonal-quadratic
  Vec eig;
  if (!cfg.eigenvalues.empty()) {
    if (cfg.mu || cfg.L || cfg.dim)
      throw ConfigError(
          "problem: give either eigenvalues or (mu, L, dim), not both");
    eig = cfg.eigenvalues;
  } else {
    if (!cfg.mu || !cfg.L || !cfg.dim)
      throw ConfigError("problem: need eigenvalues or all of mu, L, dim");
    if (cfg.spectrum_rule != "log-uniform")
      throw ConfigError("problem.spectrum-rule: unknown rule '" +
                        cfg.spectrum_rule + "'");
    eig = log_uniform_spectrum(*cfg.mu, *cfg.L, *cfg.dim, seed);
  }
  std::unique_ptr<DiagonalQuadratic> obj;
  try {
    obj = std::make_unique<DiagonalQuadratic>(std::move(eig));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem.eigenvalues: ") + e.what());
  }
  built.mu = obj->mu();
  built.L = obj->L();
  built.objective = std::move(obj);
  return built;
}

HBParams build_params(const MethodConfig& cfg, double mu, double L) {
  if (cfg.params == "explicit") {
    const HBParams p{*cfg.alpha, *cfg.beta};
    if (!(p.alpha > 0.0)) throw ConfigError("method.alpha: must be > 0");
    if (!(p.beta >= 0.0)) throw ConfigError("method.beta: must be >= 0");
    return p;
  }
  if (cfg.params == "optimal") return optimal_params(mu, L);
  if (cfg.params == "theorem2-feasible") {
    const double alpha = 1.0 / (2.0 * L);
    return {alpha, 0.9 * std::sqrt(1.0 - alpha * L)};
  }
  // theorem3-feasible
  const double alpha = 1.0 / (2.0 * L);
  return {alpha, 0.9 * std::sqrt((1.0 - alpha * L) * (1.0 - alpha * mu))};
}

std::pair<Vec, Vec> build_init(const InitConfig& cfg,
                               const ProblemConfig& problem, int dim) {
  auto check_dim = [&](const Vec& v, const char* what) {
    if (static_cast<int>(v.size()) != dim)
      throw ConfigError(std::string("init.") + what + ": dimension mismatch");
  };
  if (cfg.style == "standard-from") {
    check_dim(cfg.standard_from, "standard-from");
    return {cfg.standard_from, cfg.standard_from};
  }
  if (cfg.style == "pair") {
    check_dim(cfg.x0, "pair.x0");
    check_dim(cfg.x1, "pair.x1");
    return {cfg.x0, cfg.x1};
  }
  if (cfg.style == "named") {
    if (problem.kind != "diagonal-quadratic")
      throw ConfigError("init.named: requires a diagonal-quadratic problem");
    if (cfg.named == "worst-case-e1")
      return {unit(dim, 0, -1.0), unit(dim, 0, 1.0)};
    if (cfg.named == "worst-case-en")
      return {unit(dim, dim - 1, 1.0), unit(dim, dim - 1, 1.0)};
    // zeros-ones
    return {zeros(dim), ones(dim)};
  }
  throw ConfigError("init: missing initialization style");
}

}  // namespace hblab
