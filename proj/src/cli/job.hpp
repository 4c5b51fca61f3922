#ifndef EXTRAP_CLI_JOB_HPP
#define EXTRAP_CLI_JOB_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "extrap/operators.hpp"

namespace extrap::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kPass = 0,
  kAssertionFailure = 1,
  kUsageError = 2,
  kNonConvergence = 3,
};

/// Invalid command line or job description; the message names the offending field.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { norms, decompose, lemma, translates, counterexample, extrapolate, bilinear };

std::string to_string(Command c);
Command parse_command(const std::string& name);

struct RankOneSpec {
  double scale = 1.0;
  Index e_start = 0;
  Index e_length = 1;
  Index f_start = 0;
  Index f_length = 1;
};

struct JobSpec {
  Command command = Command::norms;
  /// Empty until resolved: taken from an input file header, else 4096.
  std::vector<Index> dims;

  // Operator descriptor; at most one is set.
  std::optional<std::string> kernel;
  std::optional<std::string> kernel_file;
  std::optional<std::string> multiplier_file;
  std::optional<RankOneSpec> rank_one;

  std::optional<std::string> function_file;
  std::vector<double> p_grid;
  double r = 1.0;
  std::optional<Index> q;
  double p0 = 2.0;
  std::vector<int> n_range;
  double epsilon = 0.01;
  std::uint64_t seed = 0x5eed;
  Index trials = 1000;
  std::optional<double> tol;

  // translates / lemma geometry
  Index e_length = 2;
  Index f_ratio = 4;

  std::optional<std::string> out;
  /// Checks gating the exit status; empty means the command's defaults.
  std::vector<std::string> require;

  bool needs_operator() const;
};

/// Fills command-dependent defaults and validates. Throws UsageError.
JobSpec resolve(JobSpec job);

/// Parses argv into a resolved job. Throws UsageError; `--help` output is
/// signalled by returning std::nullopt after printing.
std::optional<JobSpec> parse_command_line(int argc, const char* const* argv);

/// The operator named by the job's descriptor.
Operator build_operator(const JobSpec& job);

nlohmann::ordered_json to_json(const JobSpec& job);

/// Check names each command knows, and those required by default.
std::vector<std::string> known_checks(Command c);
std::vector<std::string> default_required_checks(Command c);

}  // namespace extrap::cli

#endif  // EXTRAP_CLI_JOB_HPP
