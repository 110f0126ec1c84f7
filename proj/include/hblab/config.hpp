#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hblab/objective.hpp"
#include "hblab/restart.hpp"

namespace hblab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// problem: {"kind": "diagonal-quadratic", "eigenvalues": [...]}
///       or {"kind": "diagonal-quadratic", "mu": .., "L": .., "dim": ..,
///           "spectrum-rule": "log-uniform"}
///       or {"kind": "nonconvex-pl"}
struct ProblemConfig {
  std::string kind;
  Vec eigenvalues;  // explicit spectrum when non-empty
  std::optional<double> mu;
  std::optional<double> L;
  std::optional<int> dim;
  std::string spectrum_rule = "log-uniform";
};

/// method: {"params": "explicit", "alpha": .., "beta": ..} or
///         {"params": "optimal" | "theorem2-feasible" | "theorem3-feasible"}
struct MethodConfig {
  std::string params = "optimal";
  std::optional<double> alpha;
  std::optional<double> beta;
};

/// init: exactly one of
///   {"standard-from": [...]}, {"pair": {"x0": [...], "x1": [...]}},
///   {"named": "worst-case-e1" | "worst-case-en" | "zeros-ones"}
struct InitConfig {
  std::string style;  // "standard-from" | "pair" | "named"
  Vec standard_from;
  Vec x0;
  Vec x1;
  std::string named;
};

struct RunSection {
  int max_iters = 1000;
  std::optional<double> grad_tol;
};

struct OutputsConfig {
  std::string csv_path;  // empty: standard output
  std::vector<std::string> fields{"k", "x_norm", "f", "grad_norm"};
};

struct ExperimentConfig {
  std::string command;  // optional self-description: run | adaptive | compare
  ProblemConfig problem;
  MethodConfig method;
  InitConfig init;
  RunSection run;
  RestartPolicy policy = NoRestart{};
  std::vector<RestartPolicy> policies;  // compare only
  OutputsConfig outputs;
  std::optional<double> L0;  // adaptive only
  double eps = 1e-12;
  std::uint64_t seed = 0;
};

/// Scalar-recurrence command input: either rho (double root) or (a1, a2).
struct PeakConfig {
  std::optional<double> rho;
  std::optional<double> a1;
  std::optional<double> a2;
  double x0 = 0.0;
  double x1 = 1.0;
  int K = 40;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
PeakConfig parse_peak_config(const std::string& json_text);

/// Value of the top-level "command" key, or "" when absent/unparsable.
std::string detect_config_command(const std::string& json_text);

std::string read_text_file(const std::string& path);

/// Log-uniformly spaced spectrum on [mu, L] with both endpoints included,
/// interior points drawn from the seeded generator, sorted ascending.
Vec log_uniform_spectrum(double mu, double L, int dim, std::uint64_t seed);

struct BuiltProblem {
  std::unique_ptr<Objective> objective;
  double mu = 0.0;  // certified for nonconvex-pl, exact for quadratics
  double L = 0.0;
};

BuiltProblem build_objective(const ProblemConfig& cfg, std::uint64_t seed);
HBParams build_params(const MethodConfig& cfg, double mu, double L);
std::pair<Vec, Vec> build_init(const InitConfig& cfg, const ProblemConfig& problem,
                               int dim);

}  // namespace hblab
