#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/job.hpp"
#include "cli/run.hpp"
#include "extrap/io.hpp"
#include "generators.hpp"

using namespace extrap;
using namespace extrap::cli;

namespace {

std::optional<JobSpec> parse(std::vector<std::string> args) {
  args.insert(args.begin(), "extrap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_command_line(static_cast<int>(argv.size()), argv.data());
}

JobSpec must_parse(std::vector<std::string> args) {
  auto job = parse(std::move(args));
  if (!job) throw std::runtime_error("parse returned no job");
  return *job;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "extrap_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Check check_named(const Report& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(Io, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  const DiscreteSpace s({3, 5});
  const auto f = gen::random_function(s, rng, gen::Shape::heavy);
  std::stringstream buf;
  io::write_function(buf, f);
  const auto g = io::read_function(buf);
  EXPECT_EQ(g.space(), s);
  for (Index i = 0; i < s.size(); ++i) EXPECT_EQ(g[i], f[i]);

  const auto path = scratch("roundtrip.txt");
  io::save_function(path, f);
  const auto h = io::load_function(path);
  for (Index i = 0; i < s.size(); ++i) EXPECT_EQ(h[i], f[i]);
}

TEST(Io, FormatErrors) {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return io::read_function(in);
  };
  EXPECT_NO_THROW(read("\n  dims: 2\n1 2\n"));
  EXPECT_THROW(read("2\n1 2\n"), io::FormatError);
  EXPECT_THROW(read("dims:\n"), io::FormatError);
  EXPECT_THROW(read("dims: 0\n"), io::FormatError);
  EXPECT_THROW(read("dims: 2 x\n1 2\n"), io::FormatError);
  EXPECT_THROW(read("dims: 3\n1 2\n"), io::FormatError);
  EXPECT_THROW(read("dims: 2\n1 two\n"), io::FormatError);
  EXPECT_THROW(io::load_function(scratch("does_not_exist.txt")), io::FormatError);
}

TEST(Parse, DefaultsAndFields) {
  const auto job = must_parse({"norms", "--kernel", "fejer:4", "--dims", "32,8"});
  EXPECT_EQ(job.command, Command::norms);
  EXPECT_EQ(job.dims, (std::vector<Index>{32, 8}));
  EXPECT_EQ(job.kernel, "fejer:4");
  EXPECT_EQ(job.p_grid, (std::vector<double>{1.1, 1.5, 2, 3}));
  EXPECT_EQ(job.require, default_required_checks(Command::norms));
  EXPECT_TRUE(job.needs_operator());

  const auto ce = must_parse({"counterexample", "--N-range", "5..8", "--p0", "3"});
  EXPECT_EQ(ce.n_range, (std::vector<int>{5, 6, 7, 8}));
  EXPECT_FALSE(ce.needs_operator());
  EXPECT_DOUBLE_EQ(ce.p0, 3.0);
  EXPECT_EQ(must_parse({"counterexample", "--N-range", "5,7,9"}).n_range, (std::vector<int>{5, 7, 9}));

  const auto ro = must_parse({"lemma", "--rank-one", "2,0,4,10,16", "--dims", "64"});
  ASSERT_TRUE(ro.rank_one.has_value());
  EXPECT_DOUBLE_EQ(ro.rank_one->scale, 2.0);
  EXPECT_EQ(ro.rank_one->f_length, 16u);
  EXPECT_TRUE(std::holds_alternative<RankOneOperator>(build_operator(ro)));

  EXPECT_EQ(parse_command(to_string(Command::bilinear)), Command::bilinear);
  for (auto c : {Command::norms, Command::decompose, Command::lemma, Command::translates, Command::counterexample,
                 Command::extrapolate, Command::bilinear}) {
    for (const auto& name : default_required_checks(c)) {
      const auto known = known_checks(c);
      EXPECT_NE(std::find(known.begin(), known.end(), name), known.end()) << name;
    }
  }
}

TEST(Parse, UsageErrors) {
  EXPECT_THROW(parse({"frobnicate"}), UsageError);
  EXPECT_THROW(parse({"norms", "--dims", "64"}), UsageError);
  EXPECT_THROW(parse({"norms", "--dims", "64", "--kernel", "dirac", "--rank-one", "1,0,1,2,1"}), UsageError);
  EXPECT_THROW(parse({"counterexample", "--kernel", "dirac"}), UsageError);
  EXPECT_THROW(parse({"norms", "--kernel", "dirac", "--dims", "0"}), UsageError);
  EXPECT_THROW(parse({"norms", "--kernel", "gauss", "--dims", "16"}), UsageError);
  EXPECT_THROW(parse({"norms", "--kernel", "hilbert", "--dims", "4,4"}), UsageError);
  EXPECT_THROW(parse({"norms", "--kernel", "dirac", "--dims", "16", "--require", "khinchin"}), UsageError);
  EXPECT_THROW(parse({"counterexample", "--N-range", "9..5"}), UsageError);
  EXPECT_THROW(parse({"counterexample", "--N-range", "x"}), UsageError);
  EXPECT_THROW(parse({"extrapolate", "--kernel", "dirac", "--dims", "16", "--p-grid", "1.1,1.2"}), UsageError);
  EXPECT_THROW(parse({"bilinear", "--kernel", "dirac", "--dims", "16", "--p-grid", "1.7"}), UsageError);
  EXPECT_THROW(parse({"lemma", "--rank-one", "1,0,0,2,1", "--dims", "8"}), UsageError);
  EXPECT_THROW(parse({"translates", "--kernel", "dirac", "--dims", "16", "--epsilon", "2"}), UsageError);
  EXPECT_THROW(parse({"norms", "--kernel", "dirac", "--dims", "16", "--r", "-1"}), UsageError);
  EXPECT_THROW(parse({"decompose", "--function-file", scratch("missing.txt").string()}), UsageError);
  EXPECT_FALSE(parse({"--help"}).has_value());
}

TEST(Report, ExitCodeMapping) {
  Report r;
  EXPECT_EQ(r.exit_code(), kPass);
  r.checks = {{"bounds", true, true, ""}, {"witness", false, false, ""}};
  EXPECT_EQ(r.exit_code(), kPass);
  r.checks.push_back({"convergence", false, true, ""});
  EXPECT_EQ(r.exit_code(), kNonConvergence);
  r.checks.push_back({"bounds", false, true, ""});
  EXPECT_EQ(r.exit_code(), kAssertionFailure);
}

TEST(Run, DecomposeFromFile) {
  std::mt19937_64 rng(3);
  const auto path = scratch("decompose_input.txt");
  io::save_function(path, gen::random_function(DiscreteSpace::cyclic(1024), rng, gen::Shape::exponential));
  const auto job = must_parse({"decompose", "--function-file", path.string(), "--r", "1"});
  EXPECT_EQ(job.dims, (std::vector<Index>{1024}));
  const auto report = run(job);
  EXPECT_EQ(report.exit_code(), kPass);
  for (const char* name : {"reconstruction", "support", "height", "layers"}) EXPECT_TRUE(check_named(report, name).passed) << name;
  EXPECT_EQ(report.document["exit_code"], 0);
  ASSERT_FALSE(report.table.rows.empty());
  for (const auto& row : report.table.rows) EXPECT_EQ(row.size(), report.table.header.size());
}

TEST(Run, CounterexampleExponents) {
  const auto report = run(must_parse({"counterexample", "--N-range", "5..9"}));
  EXPECT_EQ(report.exit_code(), kPass);
  EXPECT_TRUE(check_named(report, "exponent").passed);
  EXPECT_TRUE(check_named(report, "drift").passed);
  EXPECT_EQ(report.document["results"].size(), 5u);
}

TEST(Run, RankOneNormsMatchClosedForm) {
  const auto report = run(must_parse({"norms", "--rank-one", "3,0,4,16,16", "--dims", "64", "--p-grid", "1.5,2"}));
  EXPECT_EQ(report.exit_code(), kPass);
  const auto& results = report.document["results"];
  ASSERT_EQ(results.size(), 2u);
  const RankOneOperator t(3.0, MeasurableSet::interval(DiscreteSpace::cyclic(64), 0, 4),
                          MeasurableSet::interval(DiscreteSpace::cyclic(64), 16, 16));
  EXPECT_NEAR(results[0]["lower"].get<double>(), t.closed_form_norm(1.5), 1e-12);
}

TEST(Run, ReportsAreDeterministicApartFromWallTime) {
  const auto job = must_parse({"translates", "--kernel", "fejer:8", "--dims", "1024", "--trials", "50"});
  auto a = run(job).document;
  auto b = run(job).document;
  a.erase("wall_time_seconds");
  b.erase("wall_time_seconds");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Run, EmitWritesJsonAndCsv) {
  const auto base = scratch("emit");
  auto job = must_parse({"norms", "--kernel", "dirac", "--dims", "64", "--out", base.string()});
  const auto report = run(job);
  std::ostringstream console;
  emit(report, job, console);
  std::ifstream json(base.string() + ".json"), csv(base.string() + ".csv");
  ASSERT_TRUE(json && csv);
  const auto doc = nlohmann::json::parse(json);
  EXPECT_EQ(doc["tool"], "extrap");
  EXPECT_EQ(doc["job"]["command"], "norms");
  std::string header;
  std::getline(csv, header);
  EXPECT_FALSE(header.empty());
  EXPECT_NE(console.str().find("PASS bounds"), std::string::npos);

  job.out.reset();
  std::ostringstream stdout_doc;
  emit(report, job, stdout_doc);
  EXPECT_EQ(nlohmann::json::parse(stdout_doc.str())["exit_code"], 0);
}

TEST(Parse, JobFileWithCommandLineOverride) {
  const auto path = scratch("job.toml");
  {
    std::ofstream out(path);
    out << "command = \"norms\"\nkernel = \"fejer:4\"\ndims = [64]\np-grid = [1.5, 2]\n";
  }
  const auto job = must_parse({"--config", path.string()});
  EXPECT_EQ(job.command, Command::norms);
  EXPECT_EQ(job.kernel, "fejer:4");
  EXPECT_EQ(job.p_grid, (std::vector<double>{1.5, 2}));
  EXPECT_EQ(must_parse({"--config", path.string(), "--kernel", "dirac"}).kernel, "dirac");
  EXPECT_THROW(parse({"--config", scratch("no_such_job.toml").string()}), UsageError);
}
