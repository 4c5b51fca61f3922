#include "cli/job.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "extrap/io.hpp"
#include "extrap/kernels.hpp"
#include "fft.hpp"

namespace extrap::cli {

namespace {

constexpr Index kMaxPoints = Index{1} << 26;

const std::vector<std::pair<Command, std::string>>& command_names() {
  static const std::vector<std::pair<Command, std::string>> names{
      {Command::norms, "norms"},         {Command::decompose, "decompose"},
      {Command::lemma, "lemma"},         {Command::translates, "translates"},
      {Command::counterexample, "counterexample"}, {Command::extrapolate, "extrapolate"},
      {Command::bilinear, "bilinear"},
  };
  return names;
}

template <typename T>
T parse_number(std::string_view text, const std::string& field) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(field + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_n_range(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = parse_number<int>(text.substr(0, dots), "--N-range");
    const int hi = parse_number<int>(text.substr(dots + 2), "--N-range");
    if (hi < lo) throw UsageError("--N-range: empty range '" + text + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  for (const auto& item : split(text, ',')) out.push_back(parse_number<int>(item, "--N-range"));
  return out;
}

RankOneSpec parse_rank_one(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 5) {
    throw UsageError("--rank-one: expected 'scale,e_start,e_length,f_start,f_length', got '" + text + "'");
  }
  RankOneSpec spec;
  spec.scale = parse_number<double>(parts[0], "--rank-one scale");
  spec.e_start = parse_number<Index>(parts[1], "--rank-one e_start");
  spec.e_length = parse_number<Index>(parts[2], "--rank-one e_length");
  spec.f_start = parse_number<Index>(parts[3], "--rank-one f_start");
  spec.f_length = parse_number<Index>(parts[4], "--rank-one f_length");
  return spec;
}

std::vector<Index> header_dims(const std::string& path) {
  try {
    return io::load_function(path).space().dims();
  } catch (const io::FormatError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::vector<double> default_p_grid(Command c) {
  switch (c) {
    case Command::norms: return {1.1, 1.5, 2.0, 3.0};
    case Command::lemma: return {1.05, 1.1, 1.25, 1.5};
    case Command::translates: return {1.5};
    case Command::counterexample: return {1.2, 1.5};
    case Command::extrapolate: return {1.02, 1.05, 1.1, 1.2, 1.3};
    case Command::bilinear: return {1.05, 1.1, 1.2};
    case Command::decompose: return {1.1};
  }
  return {};
}

double default_tol(Command c) {
  switch (c) {
    case Command::decompose: return 1e-12;
    case Command::translates: return 1e-12;
    case Command::extrapolate: return 0.2;
    case Command::counterexample: return 0.03;
    default: return 1e-9;
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : command_names()) {
    if (cmd == c) return name;
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (const auto& [cmd, n] : command_names()) {
    if (n == name) return cmd;
  }
  throw UsageError("command: unknown command '" + name + "'");
}

bool JobSpec::needs_operator() const {
  return command != Command::decompose && command != Command::counterexample;
}

std::vector<std::string> known_checks(Command c) {
  switch (c) {
    case Command::norms: return {"bounds", "witness", "convergence"};
    case Command::decompose: return {"reconstruction", "support", "height", "layers"};
    case Command::lemma: return {"finite", "uniformity"};
    case Command::translates: return {"conditions", "fubini", "telescoping", "acceptance", "khinchin"};
    case Command::counterexample: return {"drift", "exponent"};
    case Command::extrapolate: return {"exponent", "convergence"};
    case Command::bilinear: return {"partition", "triangle", "majorant", "flat"};
  }
  return {};
}

std::vector<std::string> default_required_checks(Command c) {
  auto checks = known_checks(c);
  std::erase(checks, "convergence");
  return checks;
}

JobSpec resolve(JobSpec job) {
  const int descriptors = static_cast<int>(job.kernel.has_value()) + static_cast<int>(job.kernel_file.has_value()) +
                          static_cast<int>(job.multiplier_file.has_value()) +
                          static_cast<int>(job.rank_one.has_value());
  if (job.needs_operator()) {
    if (descriptors == 0) {
      throw UsageError("operator: one of --kernel, --kernel-file, --multiplier-file, --rank-one is required");
    }
    if (descriptors > 1) throw UsageError("operator: give exactly one operator descriptor");
  } else if (descriptors > 0) {
    throw UsageError("operator: command '" + to_string(job.command) + "' takes no operator descriptor");
  }

  if (job.dims.empty()) {
    if (job.kernel_file) job.dims = header_dims(*job.kernel_file);
    else if (job.multiplier_file) job.dims = header_dims(*job.multiplier_file);
    else if (job.function_file) job.dims = header_dims(*job.function_file);
    else job.dims = {4096};
  }
  Index n = 1;
  for (Index d : job.dims) {
    if (d == 0) throw UsageError("--dims: every dimension must be positive");
    if (n > kMaxPoints / d) throw UsageError("--dims: more than 2^26 points");
    n *= d;
  }

  if (job.p_grid.empty()) job.p_grid = default_p_grid(job.command);
  for (double p : job.p_grid) {
    const bool ok = (job.command == Command::norms) ? (p >= 1.0) : (p > 1.0 && std::isfinite(p));
    if (!ok || std::isnan(p)) {
      std::ostringstream msg;
      msg << "--p-grid: exponent " << p << " out of range for '" << to_string(job.command) << "'";
      throw UsageError(msg.str());
    }
  }
  if (!(job.r >= 0.0) || !std::isfinite(job.r)) throw UsageError("--r: must be a finite nonnegative number");
  if (!(job.p0 > 1.0) || !std::isfinite(job.p0)) throw UsageError("--p0: must satisfy 1 < p0 < inf");
  if (!(job.epsilon > 0.0 && job.epsilon <= 1.0)) throw UsageError("--epsilon: must lie in (0, 1]");
  if (job.trials == 0) throw UsageError("--trials: must be >= 1");
  if (job.q && *job.q == 0) throw UsageError("--q: must be >= 1");
  if (!job.q) job.q = 1;
  if (!job.tol) job.tol = default_tol(job.command);
  if (!(*job.tol > 0.0)) throw UsageError("--tol: must be positive");

  if (job.command == Command::counterexample) {
    if (job.n_range.empty()) {
      for (int v = 6; v <= 14; ++v) job.n_range.push_back(v);
    }
    if (job.n_range.size() < 2) throw UsageError("--N-range: needs at least two values");
    for (int v : job.n_range) {
      if (v < 2) throw UsageError("--N-range: every N must be >= 2");
    }
  }
  if (job.command == Command::extrapolate && job.p_grid.size() < 4) {
    throw UsageError("--p-grid: extrapolate needs at least four exponents");
  }
  if (job.command == Command::bilinear) {
    for (double p : job.p_grid) {
      if (!(p < (1.0 + job.p0) / 2.0)) throw UsageError("--p-grid: bilinear needs every p < (1 + p0)/2");
    }
  }
  if (job.command == Command::translates || job.command == Command::lemma) {
    if (job.e_length == 0 || job.f_ratio == 0) throw UsageError("--e-length/--f-ratio: must be >= 1");
    if (job.e_length * job.f_ratio > n) throw UsageError("--e-length/--f-ratio: F does not fit in the space");
  }
  if (job.rank_one) {
    const auto& ro = *job.rank_one;
    if (!(ro.scale > 0.0) || !std::isfinite(ro.scale)) throw UsageError("--rank-one: scale must be positive");
    if (ro.e_length == 0 || ro.f_length == 0 || ro.e_start >= n || ro.f_start >= n || ro.e_length > n ||
        ro.f_length > n) {
      throw UsageError("--rank-one: blocks must be nonempty and lie in the space");
    }
  }
  if (job.kernel && job.kernel->rfind("hilbert", 0) == 0 && job.dims.size() != 1) {
    throw UsageError("--kernel: hilbert needs a one-dimensional space");
  }
  if (job.kernel) {
    // parse the name on a tiny space of the same rank
    try {
      kernels::by_name(DiscreteSpace(std::vector<Index>(job.dims.size(), 2)), *job.kernel);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--kernel: ") + e.what());
    }
  }

  if (job.require.empty()) {
    job.require = default_required_checks(job.command);
  } else {
    const auto known = known_checks(job.command);
    for (const auto& name : job.require) {
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw UsageError("--require: '" + name + "' is not a check of '" + to_string(job.command) + "'");
      }
    }
  }
  return job;
}

std::optional<JobSpec> parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Numerical checks for L^p operator-norm growth and the L log^r L endpoint"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "Job file of 'option = value' lines; flags on the command line win");

  JobSpec job;
  std::string command;
  std::vector<Index> dims;
  std::string kernel, kernel_file, multiplier_file, rank_one, function_file, n_range, out;
  std::vector<double> p_grid;
  Index q = 0;
  double tol = 0.0;
  std::vector<std::string> require;

  std::vector<std::string> names;
  for (const auto& [_, name] : command_names()) names.push_back(name);
  app.add_option("command", command, "norms | decompose | lemma | translates | counterexample | extrapolate | bilinear")
      ->required()
      ->configurable()
      ->check(CLI::IsMember(names));
  app.add_option("--dims", dims, "Cyclic factors, e.g. 4096 or 64,64")->delimiter(',');
  app.add_option("--kernel", kernel, "dirac | constant | dirichlet:m | fejer:m | hilbert | random:seed");
  app.add_option("--kernel-file", kernel_file, "Kernel values file");
  app.add_option("--multiplier-file", multiplier_file, "Real, even Fourier multiplier values file");
  app.add_option("--rank-one", rank_one, "scale,e_start,e_length,f_start,f_length (index blocks)");
  app.add_option("--function-file", function_file, "Input function for decompose");
  app.add_option("--p-grid", p_grid, "Exponents, comma separated")->delimiter(',');
  app.add_option("--r", job.r, "Logarithm exponent r")->capture_default_str();
  app.add_option("--q", q, "Layer width for decompose");
  app.add_option("--p0", job.p0, "Base exponent p0")->capture_default_str();
  app.add_option("--N-range", n_range, "Counterexample N values: lo..hi or a comma list");
  app.add_option("--epsilon", job.epsilon, "Translate density constant")->capture_default_str();
  app.add_option("--seed", job.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--trials", job.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--tol", tol, "Tolerance of the command's main assertion");
  app.add_option("--e-length", job.e_length, "Length of the block E")->capture_default_str();
  app.add_option("--f-ratio", job.f_ratio, "|F|/|E| for translates")->capture_default_str();
  app.add_option("--out", out, "Write <out>.json and <out>.csv instead of printing the report");
  app.add_option("--require", require, "Checks that gate the exit status")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  job.command = parse_command(command);
  job.dims = dims;
  if (!kernel.empty()) job.kernel = kernel;
  if (!kernel_file.empty()) job.kernel_file = kernel_file;
  if (!multiplier_file.empty()) job.multiplier_file = multiplier_file;
  if (!rank_one.empty()) job.rank_one = parse_rank_one(rank_one);
  if (!function_file.empty()) job.function_file = function_file;
  if (!out.empty()) job.out = out;
  job.p_grid = p_grid;
  if (app.count("--q") > 0) job.q = q;
  if (app.count("--tol") > 0) job.tol = tol;
  if (!n_range.empty()) job.n_range = parse_n_range(n_range);
  job.require = require;
  return resolve(std::move(job));
}

Operator build_operator(const JobSpec& job) {
  const DiscreteSpace space(job.dims);
  auto load_on_space = [&](const std::string& path) {
    GridFunction f = io::load_function(path);
    if (!(f.space() == space)) throw UsageError(path + ": dims do not match --dims");
    return f;
  };
  if (job.kernel) {
    try {
      return ConvolutionOperator(kernels::by_name(space, *job.kernel));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--kernel: ") + e.what());
    }
  }
  if (job.kernel_file) return ConvolutionOperator(load_on_space(*job.kernel_file));
  if (job.multiplier_file) {
    // K(y) = Σ_ξ m(ξ) e^{2πi⟨ξ,y⟩}; for real m this is the forward DFT at -y.
    const GridFunction m = load_on_space(*job.multiplier_file);
    const auto transformed = detail::full_dft(space, m.values());
    GridFunction k(space);
    double peak = 0.0, imag = 0.0;
    for (Index y = 0; y < space.size(); ++y) {
      const auto& c = transformed[space.shifted(0, space.inverse(space.element_from_flat(y)))];
      k[y] = c.real();
      peak = std::max(peak, std::abs(c));
      imag = std::max(imag, std::abs(c.imag()));
    }
    if (imag > 1e-9 * std::max(peak, 1.0)) {
      throw UsageError(*job.multiplier_file + ": multiplier is not even, so the kernel is not real");
    }
    return ConvolutionOperator(std::move(k));
  }
  if (job.rank_one) {
    const auto& ro = *job.rank_one;
    return RankOneOperator(ro.scale, MeasurableSet::interval(space, ro.e_start, ro.e_length),
                           MeasurableSet::interval(space, ro.f_start, ro.f_length));
  }
  throw UsageError("operator: no operator descriptor");
}

nlohmann::ordered_json to_json(const JobSpec& job) {
  nlohmann::ordered_json j;
  j["command"] = to_string(job.command);
  j["dims"] = job.dims;
  nlohmann::ordered_json op = nullptr;
  if (job.kernel) op = {{"kernel", *job.kernel}};
  if (job.kernel_file) op = {{"kernel_file", *job.kernel_file}};
  if (job.multiplier_file) op = {{"multiplier_file", *job.multiplier_file}};
  if (job.rank_one) {
    const auto& ro = *job.rank_one;
    op = {{"rank_one",
           {{"scale", ro.scale},
            {"e_start", ro.e_start},
            {"e_length", ro.e_length},
            {"f_start", ro.f_start},
            {"f_length", ro.f_length}}}};
  }
  j["operator"] = op;
  j["function_file"] = job.function_file ? nlohmann::ordered_json(*job.function_file) : nlohmann::ordered_json(nullptr);
  j["p_grid"] = job.p_grid;
  j["r"] = job.r;
  j["q"] = job.q.value_or(1);
  j["p0"] = job.p0;
  j["N_range"] = job.n_range;
  j["epsilon"] = job.epsilon;
  j["seed"] = job.seed;
  j["trials"] = job.trials;
  j["tol"] = job.tol.value_or(0.0);
  j["e_length"] = job.e_length;
  j["f_ratio"] = job.f_ratio;
  j["out"] = job.out ? nlohmann::ordered_json(*job.out) : nlohmann::ordered_json(nullptr);
  j["require"] = job.require;
  return j;
}

}  // namespace extrap::cli
