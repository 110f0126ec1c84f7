#include "hblab/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hblab {

std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<std::string>& trajectory_field_names() {
  static const std::vector<std::string> names{
      "k",     "x_norm", "f",    "V",    "grad_norm",
      "event", "alpha",  "beta", "L_estimate"};
  return names;
}

bool is_trajectory_field(const std::string& name) {
  const auto& names = trajectory_field_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (!is_trajectory_field(fields[i]))
      throw std::invalid_argument("write_trajectory_csv: unknown field " +
                                  fields[i]);
    out << (i ? "," : "") << fields[i];
  }
  out << '\n';
  for (const auto& rec : traj.records) {
    const ParamsEntry& pe = traj.params_at(rec.k);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      const std::string& f = fields[i];
      if (f == "k") out << rec.k;
      else if (f == "x_norm") out << format_double17(rec.x_norm);
      else if (f == "f") out << format_double17(rec.f);
      else if (f == "V") { if (rec.V) out << format_double17(*rec.V); }
      else if (f == "grad_norm") out << format_double17(rec.grad_norm);
      else if (f == "event") out << to_string(rec.event);
      else if (f == "alpha") out << format_double17(pe.params.alpha);
      else if (f == "beta") out << format_double17(pe.params.beta);
      else if (f == "L_estimate") {
        if (pe.L_estimate) out << format_double17(*pe.L_estimate);
      }
    }
    out << '\n';
  }
}

void write_recurrence_csv(std::ostream& out, const std::vector<double>& xs) {
  out << "k,x\n";
  for (std::size_t k = 0; k < xs.size(); ++k)
    out << k << ',' << format_double17(xs[k]) << '\n';
}

void write_policy_csv(std::ostream& out, const std::vector<PolicySummary>& rows) {
  out << "policy,iterations_to_tol,restarts,final_f\n";
  for (const auto& r : rows)
    out << r.policy << ',' << r.iterations_to_tol << ',' << r.restarts << ','
        << format_double17(r.final_f) << '\n';
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty input");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size())
      throw std::runtime_error("parse_csv: ragged row");
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace hblab
