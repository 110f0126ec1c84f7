#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hblab/acceptance.hpp"
#include "hblab/commands.hpp"
#include "hblab/config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "config file (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_path, "CSV output path (default: stdout)");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_flag("--quiet", args.quiet, "suppress diagnostics");
}

// Runs fn with the CSV sink resolved: a file when --out is given, stdout
// otherwise (diagnostics then go to stderr to keep the CSV clean).
template <typename Fn>
int with_io(const CommonArgs& args, Fn&& fn) {
  if (!args.out_path.empty()) {
    std::ofstream file(args.out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open " << args.out_path << " for writing\n";
      return hblab::kExitConfigError;
    }
    return fn(hblab::CommandIo{file, std::cout, args.quiet});
  }
  return fn(hblab::CommandIo{std::cout, std::cerr, args.quiet});
}

hblab::ExperimentConfig load_experiment(const CommonArgs& args,
                                        const char* command) {
  auto cfg = hblab::parse_experiment_config(hblab::read_text_file(args.config_path));
  if (!cfg.command.empty() && cfg.command != command)
    throw hblab::ConfigError("config declares command '" + cfg.command +
                             "', not '" + command + "'");
  if (args.seed) cfg.seed = *args.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Momentum-method laboratory: transient peaks, merit-function "
               "monotonicity, adaptive restarts"};
  app.require_subcommand(1);

  CommonArgs peak_args;
  hblab::PeakConfig peak_flags;
  double flag_rho = 0.0, flag_a1 = 0.0, flag_a2 = 0.0;
  auto* peak = app.add_subcommand("peak", "scalar recurrence trajectory and peak report");
  add_common(peak, peak_args, false);
  auto* rho_opt = peak->add_option("--rho", flag_rho, "double characteristic root in (0,1)");
  auto* a1_opt = peak->add_option("--a1", flag_a1, "recurrence coefficient a1");
  auto* a2_opt = peak->add_option("--a2", flag_a2, "recurrence coefficient a2");
  peak->add_option("--x0", peak_flags.x0, "initial value x0");
  peak->add_option("--x1", peak_flags.x1, "initial value x1");
  peak->add_option("--k", peak_flags.K, "number of iterations");

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "momentum run from a config");
  add_common(run, run_args, true);

  CommonArgs adaptive_args;
  auto* adaptive = app.add_subcommand("adaptive", "adaptive run with estimate doubling");
  add_common(adaptive, adaptive_args, true);

  CommonArgs compare_args;
  auto* compare = app.add_subcommand("compare", "restart-policy comparison table");
  add_common(compare, compare_args, true);

  std::string configs_dir = "configs";
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--configs", configs_dir, "directory with figure recipes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hblab::kExitConfigError;
  }

  try {
    if (peak->parsed()) {
      hblab::PeakConfig cfg;
      if (!peak_args.config_path.empty()) {
        cfg = hblab::parse_peak_config(hblab::read_text_file(peak_args.config_path));
      } else {
        cfg = peak_flags;
        if (rho_opt->count()) cfg.rho = flag_rho;
        if (a1_opt->count()) cfg.a1 = flag_a1;
        if (a2_opt->count()) cfg.a2 = flag_a2;
        const bool has_rho = cfg.rho.has_value();
        const bool has_coeffs = cfg.a1.has_value() && cfg.a2.has_value();
        if (has_rho == has_coeffs)
          throw hblab::ConfigError("peak: give either --rho or both --a1 and --a2");
      }
      return with_io(peak_args,
                     [&](hblab::CommandIo io) { return hblab::cmd_peak(cfg, io); });
    }
    if (run->parsed()) {
      const auto cfg = load_experiment(run_args, "run");
      return with_io(run_args,
                     [&](hblab::CommandIo io) { return hblab::cmd_run(cfg, io); });
    }
    if (adaptive->parsed()) {
      const auto cfg = load_experiment(adaptive_args, "adaptive");
      return with_io(adaptive_args, [&](hblab::CommandIo io) {
        return hblab::cmd_adaptive(cfg, io);
      });
    }
    if (compare->parsed()) {
      const auto cfg = load_experiment(compare_args, "compare");
      return with_io(compare_args, [&](hblab::CommandIo io) {
        return hblab::cmd_compare(cfg, io);
      });
    }
    if (selftest->parsed())
      return hblab::run_acceptance(std::cout, configs_dir) ? 0 : 1;
  } catch (const hblab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return hblab::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hblab::kExitConfigError;
  }
  return hblab::kExitConfigError;
}
