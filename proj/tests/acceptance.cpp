// Acceptance suite: one PASS/FAIL line per criterion.
//   extrap_acceptance                 run all criteria
//   extrap_acceptance --criterion 5   run one (repeatable)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "extrap/kernels.hpp"
#include "extrap/operators.hpp"
#include "extrap/verifier/counterexample.hpp"
#include "extrap/verifier/growth.hpp"
#include "extrap/verifier/key_lemma.hpp"
#include "extrap/verifier/layers.hpp"
#include "extrap/verifier/square_function.hpp"
#include "extrap/verifier/translates.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace extrap;
namespace ev = extrap::verifier;

namespace tol {
constexpr double kRearrangementNorm = 1e-12;       // AC1, relative
constexpr double kRearrangementSeconds = 10.0;     // AC1
constexpr double kModularAtNorm = 1e-9;            // AC2
constexpr double kHomogeneity = 1e-8;              // AC2, relative
constexpr double kL1Degeneration = 1e-12;          // AC2, relative
constexpr double kReconstruction = 1e-12;          // AC3, relative to max(1, sup f)
constexpr double kHeightSlack = 1e-12;             // AC3, relative
constexpr double kCoefficientSlope = 0.1;          // AC3, per unit of ln n
constexpr double kDecompositionSeconds = 60.0;     // AC3
constexpr double kPowerIterationL2 = 1e-6;         // AC4, relative
constexpr double kRankOneBruteForce = 1e-6;        // AC4, relative
constexpr double kRieszSlack = 1e-9;               // AC4, relative
constexpr double kDrift = 0.10;                    // AC5
constexpr double kCounterexampleExponent = 0.03;   // AC5, relative
constexpr double kCounterexampleSeconds = 30.0;    // AC5
constexpr double kAcceptanceFrequency = 0.5;       // AC6
constexpr Index kAcceptanceTrials = 200;           // AC6, per step
constexpr double kFubini = 1e-12;                  // AC6, relative to max(1, closed form)
constexpr double kKhinchinLow = 0.6;               // AC7
constexpr double kKhinchinHigh = 1.0;              // AC7
constexpr double kKhinchinPair = 0.02;             // AC7, relative to 1/sqrt(2)
constexpr Index kKhinchinTrials = 1000;            // AC7
constexpr Index kKhinchinPairTrials = 100000;      // AC7
constexpr double kLemmaGrowth = 2.0;               // AC8
constexpr double kLemmaSeconds = 300.0;            // AC8
constexpr double kGrowthExponent = 0.2;            // AC9
constexpr double kSyntheticExponent = 1e-10;       // AC9
constexpr double kUnitPieceSlack = 1e-12;          // AC10, relative
constexpr double kBilinearGrowth = 2.0;            // AC10
}  // namespace tol

namespace {

struct Result {
  bool pass = true;
  std::string detail;
  /// Numeric outputs compared bit for bit by the determinism criterion.
  std::vector<double> fingerprint;
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Result rearrangement_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  Result res;
  std::mt19937_64 rng(101);
  const std::vector<Index> sizes{64, 1024, 4096};
  const std::vector<double> ps{1.0, 1.3, 2.0, 3.5};
  double worst = 0.0;
  Index flip_failures = 0, order_failures = 0;
  for (int i = 0; i < 500; ++i) {
    const DiscreteSpace space = DiscreteSpace::cyclic(sizes[i % sizes.size()]);
    const GridFunction f = gen::random_function(space, rng, i);
    const Rearrangement r = decreasing_rearrangement(f);
    const GridFunction sorted(space, std::vector<double>(r.sorted_values().begin(), r.sorted_values().end()));
    for (double p : ps) {
      const double a = lp_norm(sorted, p), b = lp_norm(f, p);
      worst = std::max(worst, std::abs(a - b) / b);
      res.fingerprint.push_back(a);
    }
    for (Index k = 1; k < r.size(); ++k) order_failures += (r.sorted_values()[k] > r.sorted_values()[k - 1]) ? 1 : 0;
    const oracle::ExceedanceCounter counter(f);
    const Index n = space.size();
    for (Index k = 1; k <= n; ++k) {
      const double alpha = static_cast<double>(k) / static_cast<double>(n);
      flip_failures += (counter.count_above(quantile(r, alpha)) > k) ? 1 : 0;
    }
  }
  const double elapsed = seconds_since(t0);
  res.pass = worst <= tol::kRearrangementNorm && flip_failures == 0 && order_failures == 0 &&
             elapsed < tol::kRearrangementSeconds;
  res.detail = "500 functions; max relative norm gap " + fmt(worst) + ", monotonicity violations " +
               std::to_string(order_failures) + ", flip violations " + std::to_string(flip_failures) + ", " +
               fmt(elapsed) + " s (limit " + fmt(tol::kRearrangementSeconds) + " s)";
  return res;
}

Result orlicz_suite() {
  Result res;
  std::mt19937_64 rng(202);
  const std::vector<double> rs{0.5, 1.0, 2.0};
  const std::vector<double> scales{1e-6, 1e-2, 1.0, 1e3, 1e8};
  const std::vector<double> factors{2.0, 0.1, 37.0};
  double worst_mod = 0.0, worst_hom = 0.0, worst_l1 = 0.0;
  int cases = 0;
  for (int i = 0; i < 240; ++i) {
    const DiscreteSpace space = DiscreteSpace::cyclic(i % 2 ? 256 : 1000);
    GridFunction f = gen::random_function(space, rng, i);
    f *= scales[i % scales.size()];
    const OrliczParams params(rs[i % rs.size()]);
    const double lambda = luxemburg_norm(f, params);
    if (lambda > 0.0) {
      GridFunction scaled = f;
      scaled *= 1.0 / lambda;
      worst_mod = std::max(worst_mod, std::abs(modular(scaled, params) - 1.0));
    }
    for (double c : factors) {
      GridFunction g = f;
      g *= c;
      worst_hom = std::max(worst_hom, std::abs(luxemburg_norm(g, params) - c * lambda) / (c * lambda));
    }
    const double l1 = lp_norm(f, 1.0);
    worst_l1 = std::max(worst_l1, std::abs(luxemburg_norm(f, OrliczParams(0.0)) - l1) / l1);
    res.fingerprint.push_back(lambda);
    ++cases;
  }
  res.pass = worst_mod <= tol::kModularAtNorm && worst_hom <= tol::kHomogeneity && worst_l1 <= tol::kL1Degeneration;
  res.detail = std::to_string(cases) + " functions, r in {0.5,1,2}; max |modular(f/norm)-1| " + fmt(worst_mod) +
               ", homogeneity " + fmt(worst_hom) + ", r=0 vs L1 " + fmt(worst_l1);
  return res;
}

// OLS slope of y on x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxx = 0.0, sxy = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

Result atomic_decomposition_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  Result res;
  std::mt19937_64 rng(303);
  const std::vector<double> rs{0.5, 1.0, 2.0};
  double worst_err = 0.0, max_sum = 0.0;
  Index support_fail = 0, height_fail = 0;
  std::vector<std::vector<double>> log_n(rs.size()), sums(rs.size());
  for (int i = 0; i < 1000; ++i) {
    const int e = 8 + (i % 9);
    const Index ri = static_cast<Index>((i / 9) % 3);
    const DiscreteSpace space = DiscreteSpace::cyclic(Index{1} << e);
    const OrliczParams params(rs[ri]);
    GridFunction f = gen::random_function(space, rng, i / 27).abs();
    f *= 1.0 / luxemburg_norm(f, params);
    const double mod = modular(f, params);
    const AtomicDecomposition d = atomic_decompose(f, params);

    double sup = 0.0;
    for (double v : f.values()) sup = std::max(sup, v);
    const GridFunction rebuilt = d.reconstruct();
    double err = 0.0;
    for (Index x = 0; x < f.size(); ++x) err = std::max(err, std::abs(rebuilt[x] - f[x]));
    worst_err = std::max(worst_err, err / std::max(1.0, sup));
    for (const auto& s : d.slices) {
      support_fail += (s.support_measure > std::exp2(-s.j + 1)) ? 1 : 0;
      const double bound = std::pow(static_cast<double>(s.j), -params.r()) * std::exp2(s.j);
      height_fail += (s.height > bound * (1.0 + tol::kHeightSlack)) ? 1 : 0;
    }
    const double normalized = d.total_coefficient_sum() / std::max(1.0, mod);
    max_sum = std::max(max_sum, normalized);
    log_n[ri].push_back(std::log(static_cast<double>(space.size())));
    sums[ri].push_back(normalized);
    res.fingerprint.push_back(d.total_coefficient_sum());
  }
  double worst_slope = 0.0;
  std::string slopes, tail_slopes;
  for (Index ri = 0; ri < rs.size(); ++ri) {
    const double s = slope(log_n[ri], sums[ri]);
    worst_slope = std::max(worst_slope, std::abs(s));
    slopes += (ri ? ", " : "") + fmt(s);
    // Diagnostic only: the same fit restricted to n >= 2^12.
    std::vector<double> x, y;
    for (Index k = 0; k < log_n[ri].size(); ++k) {
      if (log_n[ri][k] >= 12.0 * std::numbers::ln2 - 1e-9) {
        x.push_back(log_n[ri][k]);
        y.push_back(sums[ri][k]);
      }
    }
    tail_slopes += (ri ? ", " : "") + fmt(slope(x, y));
  }
  const double elapsed = seconds_since(t0);
  res.pass = worst_err <= tol::kReconstruction && support_fail == 0 && height_fail == 0 &&
             worst_slope <= tol::kCoefficientSlope && std::isfinite(max_sum) && elapsed < tol::kDecompositionSeconds;
  res.detail = "1000 functions, n = 2^8..2^16; reconstruction " + fmt(worst_err) + ", support/height violations " +
               std::to_string(support_fail) + "/" + std::to_string(height_fail) + ", max coefficient sum " +
               fmt(max_sum) + ", slopes vs ln n (r=0.5,1,2) " + slopes +
               " (n >= 2^12 only: " + tail_slopes + "), " + fmt(elapsed) + " s";
  return res;
}

Result operator_norm_oracles() {
  Result res;
  std::string notes;

  // Nonnegative kernels at p = 2.
  double worst_l2 = 0.0;
  {
    std::mt19937_64 rng(404);
    std::vector<GridFunction> kernels;
    kernels.push_back(kernels::fejer(DiscreteSpace::cyclic(64), 4));
    kernels.push_back(kernels::fejer(DiscreteSpace::cyclic(1024), 16));
    kernels.push_back(kernels::fejer(DiscreteSpace({16, 16}), 3));
    kernels.push_back(kernels::dirac(DiscreteSpace::cyclic(128)));
    for (Index n : {Index{64}, Index{256}}) {
      GridFunction k = kernels::random(DiscreteSpace::cyclic(n), rng());
      kernels.push_back(k.abs());
    }
    for (const auto& k : kernels) {
      const ConvolutionOperator conv(k);
      const NormReport rep = power_iteration(conv, 2.0);
      // The reference value comes from a direct DFT when n is small.
      double ref = conv.max_abs_multiplier();
      if (k.size() <= 256) {
        ref = 0.0;
        for (const auto& c : oracle::multiplier(k.space().dims(), std::vector<double>(k.values().begin(), k.values().end()))) {
          ref = std::max(ref, std::abs(c));
        }
      }
      worst_l2 = std::max(worst_l2, std::abs(rep.lower - ref) / ref);
      res.fingerprint.push_back(rep.lower);
    }
  }

  // Rank-one closed form against a dense brute-force maximization.
  double worst_rank_one = 0.0;
  {
    std::mt19937_64 rng(405);
    for (Index n : {Index{16}, Index{64}, Index{256}}) {
      const DiscreteSpace space = DiscreteSpace::cyclic(n);
      std::bernoulli_distribution coin_e(0.2), coin_f(0.4);
      std::vector<bool> e(n), f(n);
      std::vector<Index> ei, fi;
      for (Index i = 0; i < n; ++i) {
        e[i] = coin_e(rng);
        f[i] = coin_f(rng);
      }
      e[0] = true;
      f[n - 1] = true;
      for (Index i = 0; i < n; ++i) {
        if (e[i]) ei.push_back(i);
        if (f[i]) fi.push_back(i);
      }
      const double s = 1.0 + 3.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const RankOneOperator op(s, MeasurableSet::from_indices(space, ei), MeasurableSet::from_indices(space, fi));
      const auto dense = oracle::rank_one_matrix(n, s, e, f);
      for (double p : {1.1, 1.5, 2.0, 3.0}) {
        const double closed = opnorm_lp(op, p).upper / (1.0 + kUpperBoundSlack);
        const double brute = oracle::brute_force_norm(dense, p, rng(), n > 64 ? 3 : 10, n > 64 ? 200 : 1000);
        worst_rank_one = std::max(worst_rank_one, std::abs(closed - brute) / closed);
        res.fingerprint.push_back(brute);
      }
    }
  }

  // Interpolation consistency on every tested operator.
  Index riesz_checks = 0, riesz_fail = 0, order_fail = 0;
  {
    std::vector<Operator> ops;
    ops.emplace_back(ConvolutionOperator(kernels::dirichlet(DiscreteSpace::cyclic(64), 4)));
    ops.emplace_back(ConvolutionOperator(kernels::fejer(DiscreteSpace::cyclic(256), 8)));
    ops.emplace_back(ConvolutionOperator(kernels::hilbert(DiscreteSpace::cyclic(256))));
    ops.emplace_back(ConvolutionOperator(kernels::random(DiscreteSpace::cyclic(128), 7)));
    ops.emplace_back(ConvolutionOperator(kernels::dirichlet(DiscreteSpace({8, 8}), 2)));
    const DiscreteSpace s64 = DiscreteSpace::cyclic(64);
    ops.emplace_back(RankOneOperator(2.0, MeasurableSet::interval(s64, 0, 5), MeasurableSet::interval(s64, 10, 20)));
    const std::vector<double> ps{1.0, 1.25, 1.5, 2.0, 3.0, 4.0, kInfinity};
    for (const auto& op : ops) {
      std::vector<NormReport> reps;
      for (double p : ps) {
        reps.push_back(opnorm_lp(op, p));
        order_fail += (reps.back().lower > reps.back().upper) ? 1 : 0;
        res.fingerprint.push_back(reps.back().lower);
      }
      for (Index a = 0; a < ps.size(); ++a) {
        for (Index b = a + 1; b < ps.size(); ++b) {
          for (Index c = b + 1; c < ps.size(); ++c) {
            const double bound = interpolate_bound(ps[a], reps[a].upper, ps[c], reps[c].upper, ps[b]);
            ++riesz_checks;
            riesz_fail += (reps[b].lower > bound * (1.0 + tol::kRieszSlack)) ? 1 : 0;
          }
        }
      }
    }
  }

  res.pass = worst_l2 <= tol::kPowerIterationL2 && worst_rank_one <= tol::kRankOneBruteForce && riesz_fail == 0 &&
             order_fail == 0;
  res.detail = "p=2 power iteration vs max|m| " + fmt(worst_l2) + "; rank-one closed form vs brute force " +
               fmt(worst_rank_one) + "; interpolation checks " + std::to_string(riesz_checks) + " with " +
               std::to_string(riesz_fail) + " violations, lower>upper " + std::to_string(order_fail);
  return res;
}

Result counterexample_campaign() {
  const auto t0 = std::chrono::steady_clock::now();
  Result res;
  const std::vector<int> ns{6, 7, 8, 9, 10, 11, 12, 13, 14};
  const std::vector<double> ps{1.2, 1.5};
  const auto camp = ev::run_counterexample_campaign(ns, 2.0, 1.0, ps);
  // r(p0'/p - 1/(p0-1)) at p0 = 2, r = 1.
  const std::vector<double> expected{2.0 / 1.2 - 1.0, 2.0 / 1.5 - 1.0};
  double worst = 0.0;
  std::string fits;
  for (Index i = 0; i < ps.size(); ++i) {
    const double dev = std::abs(camp.fits[i].exponent - expected[i]) / expected[i];
    worst = std::max(worst, dev);
    fits += (i ? ", " : "") + fmt(camp.fits[i].exponent, 6) + " vs " + fmt(expected[i], 6);
  }
  const double elapsed = seconds_since(t0);
  res.pass = camp.norm_p0_drift <= tol::kDrift && camp.endpoint_drift <= tol::kDrift &&
             worst <= tol::kCounterexampleExponent && elapsed < tol::kCounterexampleSeconds;
  res.detail = "N = 6..14; drift of ||T||_2 " + fmt(camp.norm_p0_drift) + ", of endpoint " +
               fmt(camp.endpoint_drift) + "; N-exponents (p=1.2, 1.5) " + fits + ", " + fmt(elapsed) + " s";
  return res;
}

struct TranslateInstance {
  std::string name;
  Operator op;
  Index e_length;
  Index f_ratio;
  double p;
};

std::vector<TranslateInstance> translate_instances() {
  const DiscreteSpace line = DiscreteSpace::cyclic(4096);
  const DiscreteSpace plane({64, 64});
  std::vector<TranslateInstance> out;
  out.push_back({"fejer:8", ConvolutionOperator(kernels::fejer(line, 8)), 2, 4, 1.5});
  out.push_back({"dirichlet:8", ConvolutionOperator(kernels::dirichlet(line, 8)), 1, 4, 1.1});
  out.push_back({"hilbert", ConvolutionOperator(kernels::hilbert(line)), 2, 4, 2.0});
  out.push_back({"dirac", ConvolutionOperator(kernels::dirac(line)), 3, 3, 1.25});
  out.push_back({"fejer:4 on 64x64", ConvolutionOperator(kernels::fejer(plane, 4)), 2, 4, 1.5});
  return out;
}

struct BuiltFamily {
  ev::TranslateFamily family;
  GridFunction h;
  MeasurableSet f_set;
};

BuiltFamily build_family(const TranslateInstance& inst, Index acceptance_trials) {
  const DiscreteSpace& space = space_of(inst.op);
  const Index n = space.size();
  const Index flen = inst.e_length * inst.f_ratio;
  const MeasurableSet e = MeasurableSet::interval(space, 0, inst.e_length);
  const MeasurableSet f_set = MeasurableSet::interval(space, (n - (flen - inst.e_length) / 2) % n, flen);
  GridFunction f = indicator(e);
  f *= 1.0 / lp_norm(f, inst.p);
  const GridFunction h = restrict_to(extrap::apply(inst.op, f), f_set).abs();
  ev::TranslateConfig cfg;
  cfg.epsilon = 0.01;
  cfg.seed = 606;
  cfg.acceptance_trials = acceptance_trials;
  return {ev::construct_translates(h, f, e, f_set, inst.p, cfg), h, f_set};
}

Result translate_construction() {
  Result res;
  Index families = 0, small_n = 0, shrunk = 0, cond_fail = 0, accept_fail = 0, tele_fail = 0;
  double worst_fubini = 0.0, min_accept = 1.0;
  Index total_draws = 0;
  for (const auto& inst : translate_instances()) {
    const auto built = build_family(inst, tol::kAcceptanceTrials);
    const auto& fam = built.family;
    ++families;
    small_n += (fam.count < 3) ? 1 : 0;
    shrunk += (fam.shrinks != 0) ? 1 : 0;
    cond_fail += fam.conditions_hold() ? 0 : 1;
    const double freq =
        static_cast<double>(fam.total_trial_accepted()) / static_cast<double>(fam.total_trial_draws());
    min_accept = std::min(min_accept, freq);
    total_draws += fam.total_trial_draws();
    accept_fail += (freq >= tol::kAcceptanceFrequency && fam.total_trial_draws() >= 200) ? 0 : 1;
    for (Index J = 1; J < fam.steps.size(); ++J) {
      const auto& s = fam.steps[J];
      worst_fubini = std::max(worst_fubini, std::abs(s.average_h - s.average_h_closed_form) /
                                                std::max(1.0, s.average_h_closed_form));
      worst_fubini = std::max(worst_fubini, std::abs(s.average_f - s.average_f_closed_form) /
                                                std::max(1.0, s.average_f_closed_form));
      res.fingerprint.push_back(s.disjoint_h);
      res.fingerprint.push_back(s.disjoint_f);
      res.fingerprint.push_back(static_cast<double>(s.attempts));
    }
    const auto tele = ev::telescoping_check(built.h, built.f_set, fam);
    tele_fail += (tele.steps_hold && tele.bound_holds) ? 0 : 1;
    res.fingerprint.push_back(tele.square_l1.back());
  }
  res.pass = small_n == 0 && shrunk == 0 && cond_fail == 0 && accept_fail == 0 && worst_fubini <= tol::kFubini &&
             tele_fail == 0;
  res.detail = std::to_string(families) + " families at eps=0.01 (N<3: " + std::to_string(small_n) +
               ", shrunk: " + std::to_string(shrunk) + "); condition failures " + std::to_string(cond_fail) +
               "; min joint acceptance " + fmt(min_accept) + " over " + std::to_string(total_draws) +
               " draws; Fubini gap " + fmt(worst_fubini) + "; telescoping failures " + std::to_string(tele_fail);
  return res;
}

Result khinchin_suite() {
  Result res;
  double lo = kInfinity, hi = 0.0;
  Index families = 0;
  auto record = [&](const std::vector<GridFunction>& fam, std::uint64_t seed) {
    const auto stats = ev::khinchin_check(fam, tol::kKhinchinTrials, seed);
    lo = std::min(lo, stats.mean_ratio);
    hi = std::max(hi, stats.mean_ratio);
    res.fingerprint.push_back(stats.mean_ratio);
    ++families;
  };
  for (const auto& inst : translate_instances()) {
    const auto built = build_family(inst, 0);
    record(ev::translated_family(built.h, built.family), 707);
  }
  std::mt19937_64 rng(708);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution keep(0.3);
  const DiscreteSpace space = DiscreteSpace::cyclic(64);
  for (Index k : {Index{2}, Index{3}, Index{5}, Index{10}, Index{20}}) {
    std::vector<GridFunction> fam;
    for (Index j = 0; j < k; ++j) {
      GridFunction g(space);
      for (Index x = 0; x < g.size(); ++x) g[x] = keep(rng) ? normal(rng) : 0.0;
      g[j] = 1.0;
      fam.push_back(std::move(g));
    }
    record(fam, rng());
  }
  {
    std::vector<GridFunction> disjoint;
    for (Index j = 0; j < 8; ++j) disjoint.push_back(indicator(MeasurableSet::interval(space, 8 * j, 8)));
    record(disjoint, 709);
  }
  GridFunction h(space);
  for (Index x = 0; x < 16; ++x) h[x] = 1.0 + normal(rng) * normal(rng);
  const std::vector<GridFunction> pair{h, h};
  const auto pair_stats = ev::khinchin_check(pair, tol::kKhinchinPairTrials, 710);
  const double target = 1.0 / std::numbers::sqrt2;
  const double pair_dev = std::abs(pair_stats.mean_ratio - target) / target;
  res.fingerprint.push_back(pair_stats.mean_ratio);
  res.pass = lo >= tol::kKhinchinLow && hi <= tol::kKhinchinHigh && pair_dev <= tol::kKhinchinPair;
  res.detail = std::to_string(families) + " families x " + std::to_string(tol::kKhinchinTrials) +
               " sign draws; ratios in [" + fmt(lo) + ", " + fmt(hi) + "]; equal pair " +
               fmt(pair_stats.mean_ratio, 5) + " vs 1/sqrt2 (rel. dev " + fmt(pair_dev) + ", exact enumeration " +
               fmt(pair_stats.exact_ratio.value_or(-1.0), 5) + ")";
  return res;
}

Result key_lemma_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  Result res;
  const DiscreteSpace line = DiscreteSpace::cyclic(4096);
  const std::vector<std::pair<std::string, GridFunction>> kernels{
      {"dirichlet:8", kernels::dirichlet(line, 8)},
      {"dirichlet:32", kernels::dirichlet(line, 32)},
      {"hilbert", kernels::hilbert(line)},
  };
  ev::KeyLemmaSweepOptions options;
  options.p_values = {1.05, 1.1, 1.25, 1.5};
  options.size_ratios = {1, 4, 16, 64};
  options.e_lengths = {8, 32};
  options.seed = 808;
  bool ok = true;
  std::string parts;
  for (const auto& [name, k] : kernels) {
    const auto sweep = ev::key_lemma_sweep(ConvolutionOperator(k), OrliczParams(1.0), options);
    double growth = 0.0;
    for (Index a = 0; a < options.p_values.size(); ++a) {
      for (Index b = a + 1; b < options.p_values.size(); ++b) {
        growth = std::max(growth, sweep.sup_by_p[a] / sweep.sup_by_p[b]);
      }
    }
    ok = ok && std::isfinite(sweep.sup) && growth < tol::kLemmaGrowth;
    parts += (parts.empty() ? "" : "; ") + name + " sup " + fmt(sweep.sup) + " (p=1.05: " +
             fmt(sweep.sup_by_p.front()) + ", p=1.5: " + fmt(sweep.sup_by_p.back()) + ", growth " + fmt(growth) + ")";
    for (double v : sweep.sup_by_p) res.fingerprint.push_back(v);
  }
  const double elapsed = seconds_since(t0);
  res.pass = ok && elapsed < tol::kLemmaSeconds;
  res.detail = parts + "; " + fmt(elapsed) + " s";
  return res;
}

Result growth_exponent() {
  Result res;
  const std::vector<double> grid{1.02, 1.05, 1.1, 1.2, 1.3};
  const ConvolutionOperator hilbert(kernels::hilbert(DiscreteSpace::cyclic(4096)));
  const auto fit = ev::fit_growth_exponent(hilbert, grid, OrliczParams(1.0));
  std::string lowers;
  for (const auto& s : fit.samples) {
    lowers += (lowers.empty() ? "" : ", ") + fmt(s.norm, 4);
    res.fingerprint.push_back(s.norm);
  }
  double synthetic = 0.0;
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    for (double c : {1.0, 3.7}) {
      std::vector<ev::GrowthSample> samples;
      for (double p : grid) samples.push_back({p, c * std::pow(p - 1.0, -r)});
      synthetic = std::max(synthetic, std::abs(ev::fit_growth_samples(samples, r).exponent - r));
    }
  }
  const double dev = std::abs(fit.exponent - 1.0);
  res.pass = dev <= tol::kGrowthExponent && synthetic <= tol::kSyntheticExponent;
  res.detail = "hilbert on Z_4096: fitted exponent " + fmt(fit.exponent, 4) + " (target 1 +/- 0.2) from lower bounds [" +
               lowers + "] at p = 1.02..1.3, ||K||_1 = " + fmt(hilbert.kernel_l1(), 4) +
               (fit.all_converged ? "" : ", some runs hit the iteration cap") + "; synthetic power laws recovered to " +
               fmt(synthetic);
  return res;
}

Result layer_machinery() {
  Result res;
  std::mt19937_64 rng(1010);
  const std::vector<Index> sizes{64, 256, 1000, 4096};
  const std::vector<Index> qs{1, 2, 3, 5, 10};
  const std::vector<double> p0s{1.5, 2.0, 4.0};
  Index partition_fail = 0, refine_fail = 0, support_fail = 0, overlap_fail = 0;
  double worst_unit = 0.0;
  for (int i = 0; i < 200; ++i) {
    const DiscreteSpace space = DiscreteSpace::cyclic(sizes[i % sizes.size()]);
    const GridFunction f = gen::random_function(space, rng, i);
    const auto unit = ev::layer_split(f, 1);
    for (Index q : qs) {
      const auto layers = ev::layer_split(f, q);
      const GridFunction sum = layers.sum();
      for (Index x = 0; x < f.size(); ++x) partition_fail += (sum[x] != f[x]) ? 1 : 0;
      refine_fail += (ev::refinement_defect(layers, unit) != 0.0) ? 1 : 0;
      std::vector<int> hits(f.size(), 0);
      for (const auto& pc : layers.pieces) {
        support_fail += (pc.support_measure > std::exp2(static_cast<double>(q) * (pc.k + 1))) ? 1 : 0;
        for (Index x = 0; x < f.size(); ++x) hits[x] += (pc.piece[x] != 0.0) ? 1 : 0;
      }
      for (int h : hits) overlap_fail += (h > 1) ? 1 : 0;
      res.fingerprint.push_back(static_cast<double>(layers.pieces.size()));
    }
    for (double p0 : p0s) {
      const double ratio = ev::unit_piece_norm_ratio(f, p0) / std::exp2(1.0 / p0);
      worst_unit = std::max(worst_unit, ratio);
    }
  }

  // S3/q^r across p for the Dirichlet kernel.
  const DiscreteSpace line = DiscreteSpace::cyclic(4096);
  const ConvolutionOperator dirichlet(kernels::dirichlet(line, 8));
  const std::vector<double> ps{1.05, 1.1, 1.2};
  double worst_growth = 0.0, worst_partition = 0.0;
  std::string trail;
  for (int pair = 0; pair < 3; ++pair) {
    const GridFunction f0 = gen::random_function(line, rng, gen::Shape::exponential);
    const GridFunction g0 = gen::random_function(line, rng, pair == 2 ? gen::Shape::sparse : gen::Shape::heavy);
    std::vector<double> v;
    for (double p : ps) {
      GridFunction f = f0, g = g0;
      f *= 1.0 / lp_norm(f, p);
      g *= 1.0 / lp_norm(g, conjugate_exponent(p));
      const auto rep = ev::bilinear_split_check(dirichlet, f, g, p, 2.0, OrliczParams(1.0));
      worst_partition = std::max(worst_partition, std::abs(rep.partition_sum - rep.pairing) / std::abs(rep.pairing));
      v.push_back(rep.s3_over_qr);
      res.fingerprint.push_back(rep.s3_over_qr);
    }
    for (Index a = 0; a < v.size(); ++a) {
      for (Index b = a + 1; b < v.size(); ++b) worst_growth = std::max(worst_growth, v[a] / v[b]);
    }
    trail += (pair ? "; " : "") + fmt(v[0]) + "/" + fmt(v[1]) + "/" + fmt(v[2]);
  }
  res.pass = partition_fail == 0 && refine_fail == 0 && support_fail == 0 && overlap_fail == 0 &&
             worst_unit <= 1.0 + tol::kUnitPieceSlack && worst_growth < tol::kBilinearGrowth && worst_partition < 1e-9;
  res.detail = "200 functions x q in {1,2,3,5,10}: partition/refinement/support/overlap violations " +
               std::to_string(partition_fail) + "/" + std::to_string(refine_fail) + "/" +
               std::to_string(support_fail) + "/" + std::to_string(overlap_fail) +
               "; max unit-piece ratio / 2^{1/p0} " + fmt(worst_unit) + "; S3/q at p=1.05/1.1/1.2: " + trail +
               " (max growth " + fmt(worst_growth) + ")";
  return res;
}

struct Criterion {
  int id;
  std::string name;
  std::function<Result()> run;
  bool randomized;
};

std::vector<Criterion> criteria();

Result determinism() {
  Result res;
  std::string differing;
  int reruns = 0;
  for (const auto& c : criteria()) {
    if (!c.randomized) continue;
    const Result a = c.run();
    const Result b = c.run();
    ++reruns;
    const bool same = a.fingerprint.size() == b.fingerprint.size() && !a.fingerprint.empty() &&
                      std::memcmp(a.fingerprint.data(), b.fingerprint.data(), a.fingerprint.size() * sizeof(double)) == 0;
    if (!same) differing += (differing.empty() ? "" : ",") + std::to_string(c.id);
  }
  // Restarts evaluated concurrently must reduce to the serial result.
  const ConvolutionOperator hilbert(kernels::hilbert(DiscreteSpace::cyclic(512)));
  PowerIterationOptions serial, parallel;
  serial.parallel = false;
  parallel.parallel = true;
  const auto rs = power_iteration(hilbert, 1.3, serial);
  const auto rp = power_iteration(hilbert, 1.3, parallel);
  const bool threads_agree =
      std::memcmp(&rs.lower, &rp.lower, sizeof(double)) == 0 && rs.witness && rp.witness &&
      std::memcmp(rs.witness->values().data(), rp.witness->values().data(), rs.witness->size() * sizeof(double)) == 0;
  res.pass = differing.empty() && threads_agree;
  res.detail = std::to_string(reruns) + " randomized criteria rerun under fixed seeds: " +
               (differing.empty() ? std::string("all bit-identical") : "differences in " + differing) +
               "; parallel vs serial restarts " + (threads_agree ? "bit-identical" : "differ");
  return res;
}

std::vector<Criterion> criteria() {
  return {
      {1, "rearrangement", rearrangement_suite, true},
      {2, "orlicz norm", orlicz_suite, true},
      {3, "atomic decomposition", atomic_decomposition_suite, true},
      {4, "operator-norm oracles", operator_norm_oracles, true},
      {5, "counterexample campaign", counterexample_campaign, false},
      {6, "translate construction", translate_construction, true},
      {7, "khinchin", khinchin_suite, true},
      {8, "key-lemma sweep", key_lemma_sweep, true},
      {9, "growth exponent", growth_exponent, true},
      {10, "layers and bilinear split", layer_machinery, true},
      {11, "determinism", determinism, false},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion number 1-11 (repeatable); default all")
      ->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    all_pass = all_pass && r.pass;
    std::cout << "AC" << std::setw(2) << std::setfill('0') << c.id << std::setfill(' ') << ' '
              << (r.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << r.detail << "  [" << fmt(seconds_since(t0))
              << " s]" << std::endl;
  }
  return all_pass ? 0 : 1;
}
