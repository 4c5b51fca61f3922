#include "cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "extrap/io.hpp"
#include "extrap/verifier/counterexample.hpp"
#include "extrap/verifier/growth.hpp"
#include "extrap/verifier/key_lemma.hpp"
#include "extrap/verifier/layers.hpp"
#include "extrap/verifier/square_function.hpp"
#include "extrap/verifier/translates.hpp"

namespace extrap::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(Index v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

struct Context {
  const JobSpec& job;
  Report& report;

  void check(const std::string& name, bool passed, const std::string& detail) {
    const bool required = std::find(job.require.begin(), job.require.end(), name) != job.require.end();
    report.checks.push_back({name, passed, required, detail});
  }
};

PowerIterationOptions iteration_options(const JobSpec& job) {
  PowerIterationOptions o;
  o.seed = job.seed;
  return o;
}

GridFunction input_or_random(const JobSpec& job, std::uint64_t salt) {
  const DiscreteSpace space(job.dims);
  if (job.function_file) {
    GridFunction f = io::load_function(*job.function_file);
    if (!(f.space() == space)) throw UsageError(*job.function_file + ": dims do not match --dims");
    return f.abs();
  }
  std::mt19937_64 rng(job.seed ^ salt);
  std::exponential_distribution<double> expo(1.0);
  GridFunction f(space);
  for (Index i = 0; i < f.size(); ++i) f[i] = expo(rng);
  return f;
}

// E = [0, ℓ) and F = the block of length ρℓ centred on E.
std::pair<MeasurableSet, MeasurableSet> lemma_sets(const DiscreteSpace& space, Index len, Index ratio) {
  const Index n = space.size();
  const Index flen = len * ratio;
  return {MeasurableSet::interval(space, 0, len), MeasurableSet::interval(space, (n - (flen - len) / 2) % n, flen)};
}

void run_norms(Context& ctx) {
  const JobSpec& job = ctx.job;
  const Operator op = build_operator(job);
  auto& t = ctx.report.table;
  t.header = {"p", "lower", "upper", "method", "iterations", "converged"};
  json cases = json::array();
  bool ordered = true, witnessed = true, converged = true;
  for (double p : job.p_grid) {
    const NormReport rep = opnorm_lp(op, p, iteration_options(job));
    ordered = ordered && rep.lower <= rep.upper;
    converged = converged && rep.converged;
    if (rep.witness) {
      const double again = norm_ratio(op, *rep.witness, p);
      witnessed = witnessed && std::abs(again - rep.lower) <= 1e-12 * std::max(rep.lower, 1e-300);
    }
    cases.push_back({{"p", p},
                     {"lower", rep.lower},
                     {"upper", rep.upper},
                     {"method", rep.method},
                     {"iterations", rep.iterations},
                     {"converged", rep.converged}});
    t.rows.push_back({num(p), num(rep.lower), num(rep.upper), rep.method, num(rep.iterations),
                      rep.converged ? "1" : "0"});
  }
  SetSearch search;
  search.seed = job.seed;
  const EndpointReport endpoint = llogl_to_l1_norm(op, OrliczParams(job.r), search);
  ctx.report.document["results"] = cases;
  ctx.report.document["summary"] = {{"llogl_to_l1_lower", endpoint.lower},
                                    {"llogl_to_l1_upper_certified", endpoint.upper_certified},
                                    {"llogl_to_l1_sets_searched", endpoint.sets_searched},
                                    {"llogl_to_l1_maximizer_measure",
                                     endpoint.maximizer ? endpoint.maximizer->measure() : 0.0}};
  ctx.check("bounds", ordered, "lower <= upper at every p");
  ctx.check("witness", witnessed, "witness reproduces the lower bound to 1e-12");
  ctx.check("convergence", converged, "power iteration met its stopping rule at every p");
}

void run_decompose(Context& ctx) {
  const JobSpec& job = ctx.job;
  const OrliczParams params(job.r);
  const GridFunction f = input_or_random(job, 0xdec0);
  if (f.is_zero()) throw UsageError("decompose: the input function is identically zero");
  const AtomicDecomposition d = atomic_decompose(f, params);

  double sup = 0.0;
  for (double v : f.values()) sup = std::max(sup, v);
  const GridFunction rebuilt = d.reconstruct();
  double err = 0.0;
  for (Index i = 0; i < f.size(); ++i) err = std::max(err, std::abs(rebuilt[i] - f[i]));
  err /= std::max(1.0, sup);

  auto& t = ctx.report.table;
  t.header = {"j", "coefficient", "support_measure", "support_bound", "height", "height_bound"};
  json slices = json::array();
  bool support_ok = true, height_ok = true;
  for (const auto& s : d.slices) {
    const double support_bound = std::exp2(-s.j + 1);
    const double height_bound = std::pow(static_cast<double>(s.j), -job.r) * std::exp2(s.j);
    support_ok = support_ok && s.support_measure <= support_bound;
    height_ok = height_ok && s.height <= height_bound * (1.0 + 1e-12);
    slices.push_back({{"j", s.j},
                      {"coefficient", s.coefficient},
                      {"support_measure", s.support_measure},
                      {"height", s.height}});
    t.rows.push_back({num(s.j), num(s.coefficient), num(s.support_measure), num(support_bound), num(s.height),
                      num(height_bound)});
  }

  const auto layers = verifier::layer_split(f, *job.q);
  const auto unit = verifier::layer_split(f, 1);
  const GridFunction layer_sum = layers.sum();
  double partition_defect = 0.0;
  for (Index i = 0; i < f.size(); ++i) partition_defect = std::max(partition_defect, std::abs(layer_sum[i] - f[i]));
  const double refinement = verifier::refinement_defect(layers, unit);

  ctx.report.document["results"] = slices;
  ctx.report.document["summary"] = {{"modular", modular(f, params)},
                                    {"luxemburg_norm", luxemburg_norm(f, params)},
                                    {"coefficient_sum", d.coefficient_sum},
                                    {"remainder_bound", d.remainder_bound},
                                    {"remainder_coefficient_sum", d.remainder_coefficient_sum},
                                    {"total_coefficient_sum", d.total_coefficient_sum()},
                                    {"reconstruction_error", err},
                                    {"layer_count", layers.pieces.size()},
                                    {"layer_partition_defect", partition_defect},
                                    {"layer_refinement_defect", refinement}};
  ctx.check("reconstruction", err <= *job.tol, "max reconstruction error " + num(err));
  ctx.check("support", support_ok, "slice j has support measure <= 2^{-j+1}");
  ctx.check("height", height_ok, "slice j has height <= j^{-r} 2^j");
  ctx.check("layers", partition_defect == 0.0 && refinement == 0.0,
            "layer partition defect " + num(partition_defect) + ", refinement defect " + num(refinement));
}

void run_lemma(Context& ctx) {
  const JobSpec& job = ctx.job;
  const Operator op = build_operator(job);
  verifier::KeyLemmaSweepOptions options;
  options.p_values = job.p_grid;
  options.seed = job.seed;
  const auto sweep = verifier::key_lemma_sweep(op, OrliczParams(job.r), options);

  auto& t = ctx.report.table;
  t.header = {"e_length", "f_length", "test_function", "p", "A", "rhs", "ratio"};
  json cases = json::array();
  bool finite = !sweep.cases.empty();
  for (const auto& c : sweep.cases) {
    finite = finite && std::isfinite(c.report.ratio);
    cases.push_back({{"e_length", c.e_length},
                     {"f_length", c.f_length},
                     {"test_function", c.test_function},
                     {"p", c.report.p},
                     {"A", c.report.A},
                     {"rhs", c.report.rhs},
                     {"ratio", c.report.ratio}});
    t.rows.push_back({num(c.e_length), num(c.f_length), c.test_function, num(c.report.p), num(c.report.A),
                      num(c.report.rhs), num(c.report.ratio)});
  }
  // Largest growth factor of the sup when p moves down the grid.
  double growth = 0.0;
  for (Index a = 0; a < job.p_grid.size(); ++a) {
    for (Index b = 0; b < job.p_grid.size(); ++b) {
      if (job.p_grid[a] < job.p_grid[b]) growth = std::max(growth, sweep.sup_by_p[a] / sweep.sup_by_p[b]);
    }
  }
  ctx.report.document["results"] = cases;
  ctx.report.document["summary"] = {{"sup", sweep.sup}, {"sup_by_p", sweep.sup_by_p}, {"growth_factor", growth}};
  ctx.check("finite", finite, "every ratio is finite");
  ctx.check("uniformity", growth < 2.0, "largest growth of the sup as p decreases = " + num(growth));
}

void run_translates(Context& ctx) {
  const JobSpec& job = ctx.job;
  const Operator op = build_operator(job);
  const DiscreteSpace& space = space_of(op);
  const double p = job.p_grid.front();
  const auto [e, f_set] = lemma_sets(space, job.e_length, job.f_ratio);
  GridFunction f = indicator(e);
  f *= 1.0 / lp_norm(f, p);
  const GridFunction h = restrict_to(extrap::apply(op, f), f_set).abs();
  if (h.is_zero()) throw UsageError("translates: T f vanishes on F; choose another operator or geometry");

  verifier::TranslateConfig cfg;
  cfg.epsilon = job.epsilon;
  cfg.seed = job.seed;
  cfg.acceptance_trials = job.trials;
  const auto fam = verifier::construct_translates(h, f, e, f_set, p, cfg);
  const auto tele = verifier::telescoping_check(h, f_set, fam);
  const auto moved = verifier::translated_family(h, fam);
  const auto khin = verifier::khinchin_check(moved, job.trials, job.seed);

  auto& t = ctx.report.table;
  t.header = {"J",         "omega",          "attempts",  "disjoint_h",     "h_bound",    "disjoint_f",
              "average_h", "average_h_closed", "average_f", "average_f_closed", "exact_acceptance", "square_l1"};
  json steps = json::array();
  bool fubini = true;
  for (Index J = 0; J < fam.steps.size(); ++J) {
    const auto& s = fam.steps[J];
    const Index omega = space.flat_index(s.omega.residues);
    if (J > 0) {
      fubini = fubini &&
               std::abs(s.average_h - s.average_h_closed_form) <= *job.tol * std::max(1.0, s.average_h_closed_form) &&
               std::abs(s.average_f - s.average_f_closed_form) <= *job.tol * std::max(1.0, s.average_f_closed_form);
    }
    steps.push_back({{"J", J},
                     {"omega", omega},
                     {"attempts", s.attempts},
                     {"disjoint_h", s.disjoint_h},
                     {"disjoint_f", s.disjoint_f},
                     {"average_h", s.average_h},
                     {"average_h_closed_form", s.average_h_closed_form},
                     {"average_f", s.average_f},
                     {"average_f_closed_form", s.average_f_closed_form},
                     {"exact_acceptance", s.exact_acceptance},
                     {"trial_draws", s.trial_draws},
                     {"trial_accepted", s.trial_accepted},
                     {"square_l1", tele.square_l1[J]}});
    t.rows.push_back({num(J), num(omega), num(s.attempts), num(s.disjoint_h), num(fam.h_bound), num(s.disjoint_f),
                      num(s.average_h), num(s.average_h_closed_form), num(s.average_f),
                      num(s.average_f_closed_form), num(s.exact_acceptance), num(tele.square_l1[J])});
  }
  bool av_p = true, av_pdual = true, av_f = true;
  for (Index J = 1; J < fam.steps.size(); ++J) {
    av_p = av_p && fam.steps[J].average_h <= fam.average_h_target_p;
    av_pdual = av_pdual && fam.steps[J].average_h <= fam.average_h_target_pdual;
    av_f = av_f && fam.steps[J].average_f <= fam.average_f_target;
  }
  const double acceptance = fam.total_trial_draws() == 0
                                ? 1.0
                                : static_cast<double>(fam.total_trial_accepted()) /
                                      static_cast<double>(fam.total_trial_draws());
  ctx.report.document["results"] = steps;
  ctx.report.document["summary"] = {
      {"p", p},
      {"N", fam.count},
      {"epsilon_used", fam.epsilon},
      {"shrinks", fam.shrinks},
      {"A", fam.A},
      {"e_measure", fam.e_measure},
      {"f_measure", fam.f_measure},
      {"h_bound", fam.h_bound},
      {"average_h_target_p", fam.average_h_target_p},
      {"average_h_target_pdual", fam.average_h_target_pdual},
      {"average_h_within_target_p", av_p},
      {"average_h_within_target_pdual", av_pdual},
      {"average_f_within_quarter", av_f},
      {"acceptance_frequency", acceptance},
      {"acceptance_draws", fam.total_trial_draws()},
      {"telescoped_bound", tele.telescoped_bound},
      {"final_square_l1", tele.square_l1.back()},
      {"khinchin_mean_ratio", khin.mean_ratio},
      {"khinchin_min_ratio", khin.min_ratio},
      {"khinchin_max_ratio", khin.max_ratio},
      {"khinchin_exact_ratio", khin.exact_ratio ? json(*khin.exact_ratio) : json(nullptr)}};
  ctx.check("conditions", fam.conditions_hold(), "both defining conditions hold at every step");
  ctx.check("fubini", fubini, "exact group averages match the closed forms");
  ctx.check("telescoping", tele.steps_hold && tele.bound_holds, "square-function growth and the telescoped bound");
  ctx.check("acceptance", acceptance >= 0.5, "joint acceptance frequency " + num(acceptance));
  ctx.check("khinchin", khin.mean_ratio >= 0.6 && khin.mean_ratio <= 1.0,
            "mean sign-average ratio " + num(khin.mean_ratio));
}

void run_counterexample(Context& ctx) {
  const JobSpec& job = ctx.job;
  const auto camp = verifier::run_counterexample_campaign(job.n_range, job.p0, job.r, job.p_grid);
  auto& t = ctx.report.table;
  t.header = {"N", "n", "e_measure", "f_measure", "scale", "norm_p0", "endpoint"};
  for (double p : job.p_grid) t.header.push_back("norm_p=" + num(p));
  json rows = json::array();
  for (const auto& row : camp.rows) {
    rows.push_back({{"N", row.N},
                    {"n", row.n},
                    {"e_measure", row.e_measure},
                    {"f_measure", row.f_measure},
                    {"scale", row.scale},
                    {"norm_p0", row.norm_p0},
                    {"endpoint", row.endpoint},
                    {"norms", row.norms}});
    std::vector<std::string> r{num(row.N),         num(row.n),       num(row.e_measure), num(row.f_measure),
                               num(row.scale),     num(row.norm_p0), num(row.endpoint)};
    for (double v : row.norms) r.push_back(num(v));
    t.rows.push_back(std::move(r));
  }
  json fits = json::array();
  bool exponents_ok = true;
  for (Index i = 0; i < camp.fits.size(); ++i) {
    const double pred = camp.predicted_exponents[i];
    const double got = camp.fits[i].exponent;
    const double dev = (pred != 0.0) ? std::abs(got - pred) / std::abs(pred) : std::abs(got);
    exponents_ok = exponents_ok && dev <= *job.tol;
    fits.push_back({{"p", job.p_grid[i]},
                    {"exponent", got},
                    {"predicted", pred},
                    {"relative_deviation", dev},
                    {"residual", camp.fits[i].residual}});
  }
  ctx.report.document["results"] = rows;
  ctx.report.document["summary"] = {
      {"fits", fits}, {"norm_p0_drift", camp.norm_p0_drift}, {"endpoint_drift", camp.endpoint_drift}};
  ctx.check("drift", camp.norm_p0_drift <= 0.1 && camp.endpoint_drift <= 0.1,
            "norm drift " + num(camp.norm_p0_drift) + ", endpoint drift " + num(camp.endpoint_drift));
  ctx.check("exponent", exponents_ok, "fitted N-exponents within tol of r(p0'/p - 1/(p0-1))");
}

void run_extrapolate(Context& ctx) {
  const JobSpec& job = ctx.job;
  const Operator op = build_operator(job);
  const auto fit = verifier::fit_growth_exponent(op, job.p_grid, OrliczParams(job.r), iteration_options(job));
  auto& t = ctx.report.table;
  t.header = {"p", "lower", "upper", "method", "iterations", "converged"};
  json cases = json::array();
  for (const auto& rep : fit.reports) {
    cases.push_back({{"p", rep.p},
                     {"lower", rep.lower},
                     {"upper", rep.upper},
                     {"method", rep.method},
                     {"iterations", rep.iterations},
                     {"converged", rep.converged}});
    t.rows.push_back({num(rep.p), num(rep.lower), num(rep.upper), rep.method, num(rep.iterations),
                      rep.converged ? "1" : "0"});
  }
  ctx.report.document["results"] = cases;
  ctx.report.document["summary"] = {{"exponent", fit.exponent},
                                    {"intercept", fit.intercept},
                                    {"residual", fit.residual},
                                    {"r_hint", job.r},
                                    {"hint_deviation", fit.hint_deviation},
                                    {"all_converged", fit.all_converged}};
  ctx.check("exponent", fit.hint_deviation <= *job.tol,
            "fitted exponent " + num(fit.exponent) + " against r = " + num(job.r));
  ctx.check("convergence", fit.all_converged, "power iteration met its stopping rule at every p");
}

void run_bilinear(Context& ctx) {
  const JobSpec& job = ctx.job;
  const Operator op = build_operator(job);
  const OrliczParams params(job.r);
  const GridFunction f0 = input_or_random(job, 0xf00d);
  const GridFunction g0 = input_or_random(job, 0x9a11);
  if (f0.is_zero()) throw UsageError("bilinear: the input function is identically zero");

  auto& t = ctx.report.table;
  t.header = {"p", "q", "pairing", "partition_sum", "s2", "s3", "s3_over_qr", "s2_majorant"};
  json cases = json::array();
  bool partition = true, triangle = true, majorant = true;
  std::vector<std::pair<double, double>> flat;  // (p, s3/q^r)
  for (double p : job.p_grid) {
    GridFunction f = f0, g = g0;
    f *= 1.0 / lp_norm(f, p);
    g *= 1.0 / lp_norm(g, conjugate_exponent(p));
    const auto rep = verifier::bilinear_split_check(op, f, g, p, job.p0, params);
    partition = partition && std::abs(rep.partition_sum - rep.pairing) <= *job.tol * std::max(1.0, std::abs(rep.pairing));
    triangle = triangle && rep.s2 + rep.s3 >= std::abs(rep.pairing) * (1.0 - 1e-12);
    majorant = majorant && rep.s2 <= rep.s2_majorant * (1.0 + 1e-12);
    flat.emplace_back(p, rep.s3_over_qr);
    cases.push_back({{"p", p},
                     {"q", rep.q},
                     {"pairing", rep.pairing},
                     {"partition_sum", rep.partition_sum},
                     {"s2", rep.s2},
                     {"s3", rep.s3},
                     {"s3_over_qr", rep.s3_over_qr},
                     {"s2_majorant", rep.s2_majorant},
                     {"operator_p0_upper", rep.operator_p0_upper},
                     {"f_layers", rep.f_layers},
                     {"g_layers", rep.g_layers}});
    t.rows.push_back({num(p), num(rep.q), num(rep.pairing), num(rep.partition_sum), num(rep.s2), num(rep.s3),
                      num(rep.s3_over_qr), num(rep.s2_majorant)});
  }
  // Largest growth factor of s3/q^r when p moves down the grid.
  double growth = 0.0;
  for (const auto& [pa, va] : flat) {
    for (const auto& [pb, vb] : flat) {
      if (pa < pb) growth = std::max(growth, va / vb);
    }
  }
  ctx.report.document["results"] = cases;
  ctx.report.document["summary"] = {{"s3_over_qr_growth", growth}};
  ctx.check("partition", partition, "layer terms sum to the full pairing");
  ctx.check("triangle", triangle, "s2 + s3 >= |pairing|");
  ctx.check("majorant", majorant, "s2 below its Hölder majorant");
  ctx.check("flat", growth < 2.0, "largest growth of s3/q^r as p decreases = " + num(growth));
}

}  // namespace

int Report::exit_code() const {
  bool assertion = false, convergence = false;
  for (const auto& c : checks) {
    if (!c.required || c.passed) continue;
    (c.name == "convergence" ? convergence : assertion) = true;
  }
  if (assertion) return kAssertionFailure;
  if (convergence) return kNonConvergence;
  return kPass;
}

Report run(const JobSpec& job) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.document["tool"] = "extrap";
  report.document["version"] = kToolVersion;
  report.document["job"] = to_json(job);
  Context ctx{job, report};
  switch (job.command) {
    case Command::norms: run_norms(ctx); break;
    case Command::decompose: run_decompose(ctx); break;
    case Command::lemma: run_lemma(ctx); break;
    case Command::translates: run_translates(ctx); break;
    case Command::counterexample: run_counterexample(ctx); break;
    case Command::extrapolate: run_extrapolate(ctx); break;
    case Command::bilinear: run_bilinear(ctx); break;
  }
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"required", c.required}, {"detail", c.detail}});
  }
  report.document["checks"] = checks;
  report.document["exit_code"] = report.exit_code();
  report.document["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_table(std::ostream& out, const Table& table) {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (Index i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void emit(const Report& report, const JobSpec& job, std::ostream& console) {
  if (!job.out) {
    console << report.document.dump(2) << '\n';
    return;
  }
  const std::string json_path = *job.out + ".json";
  const std::string csv_path = *job.out + ".csv";
  std::ofstream js(json_path);
  std::ofstream csv(csv_path);
  if (!js || !csv) throw std::runtime_error("cannot write report files under '" + *job.out + "'");
  js << report.document.dump(2) << '\n';
  write_table(csv, report.table);
  for (const auto& c : report.checks) {
    console << (c.passed ? "PASS " : "FAIL ") << c.name << (c.required ? "" : " (not required)") << ": " << c.detail
            << '\n';
  }
  console << "wrote " << json_path << " and " << csv_path << '\n';
}

}  // namespace extrap::cli
