#pragma once

#include <iosfwd>
#include <string>

namespace hblab {

/// Runs the full acceptance suite, printing one PASS/FAIL line per
/// criterion to `report`. `configs_dir` must hold the checked-in figure
/// recipe configs (used by the determinism criterion). Returns true iff
/// every criterion passed.
bool run_acceptance(std::ostream& report, const std::string& configs_dir);

}  // namespace hblab
