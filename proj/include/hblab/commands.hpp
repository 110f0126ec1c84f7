#pragma once

#include <iosfwd>

#include "hblab/config.hpp"

namespace hblab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitUnstable = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitDiverged = 4;

/// Output sinks for a command: `csv` carries the machine-readable table,
/// `diag` the human-readable report (suppressed by quiet).
struct CommandIo {
  std::ostream& csv;
  std::ostream& diag;
  bool quiet = false;
};

/// Scalar recurrence trajectory plus a peak report. Unstable recurrences
/// still emit the trajectory but exit with kExitUnstable.
int cmd_peak(const PeakConfig& cfg, CommandIo io);

/// Momentum run defined by a config; trajectory CSV with requested fields.
int cmd_run(const ExperimentConfig& cfg, CommandIo io);

/// Adaptive run with estimate-doubling events; summary line on diag.
int cmd_adaptive(const ExperimentConfig& cfg, CommandIo io);

/// One summary row per restart policy, ordered by policy name.
int cmd_compare(const ExperimentConfig& cfg, CommandIo io);

}  // namespace hblab
