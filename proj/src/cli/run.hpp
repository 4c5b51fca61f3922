#ifndef EXTRAP_CLI_RUN_HPP
#define EXTRAP_CLI_RUN_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "cli/job.hpp"

namespace extrap::cli {

struct Check {
  std::string name;
  bool passed = false;
  bool required = false;
  std::string detail;
};

/// Flat plot-ready table: one header row, one row per case.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  nlohmann::ordered_json document;
  Table table;
  std::vector<Check> checks;

  /// 0 when every required check passes; 3 when only a required convergence check fails.
  int exit_code() const;
};

Report run(const JobSpec& job);

void write_table(std::ostream& out, const Table& table);

/// Writes <out>.json and <out>.csv when job.out is set, else prints the JSON document to `console`.
void emit(const Report& report, const JobSpec& job, std::ostream& console);

}  // namespace extrap::cli

#endif  // EXTRAP_CLI_RUN_HPP
