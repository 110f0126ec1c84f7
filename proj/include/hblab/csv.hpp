#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hblab/heavy_ball.hpp"
#include "hblab/restart.hpp"

namespace hblab {

/// Shortest representation with up to 17 significant digits, enough to
/// round-trip a double exactly.
std::string format_double17(double v);

/// Field names a trajectory CSV may carry, in canonical order.
const std::vector<std::string>& trajectory_field_names();

bool is_trajectory_field(const std::string& name);

/// Comma-separated, header row, 17-significant-digit decimals,
/// newline-terminated rows, no quoting. Unavailable optional values
/// (V, L_estimate) emit empty cells.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& fields);

/// Two-column k,x dump of a scalar recurrence trajectory.
void write_recurrence_csv(std::ostream& out, const std::vector<double>& xs);

/// One row per policy: policy,iterations_to_tol,restarts,final_f.
/// iterations_to_tol is -1 when the target was not reached.
void write_policy_csv(std::ostream& out, const std::vector<PolicySummary>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Strict parser for the dialect above; throws std::runtime_error on
/// ragged rows or a missing header.
CsvTable parse_csv(const std::string& text);

}  // namespace hblab
