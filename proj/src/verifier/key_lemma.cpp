#include "extrap/verifier/key_lemma.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace extrap::verifier {

namespace {

void validate(const MeasurableSet& e, const MeasurableSet& f_set, const GridFunction& f, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("key_lemma_ratio: need 1 < p < inf");
  if (!(e.space() == f_set.space()) || !(e.space() == f.space())) {
    throw std::invalid_argument("key_lemma_ratio: inputs live on different spaces");
  }
  if (e.count() == 0) throw std::invalid_argument("key_lemma_ratio: |E| must be positive");
  if (e.count() > f_set.count()) throw std::invalid_argument("key_lemma_ratio: requires |E| <= |F|");
  for (Index i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0 && !e.contains(i)) throw std::invalid_argument("key_lemma_ratio: f is not supported on E");
  }
  if (f.is_zero()) throw std::invalid_argument("key_lemma_ratio: f is identically zero");
}

double restricted_l1(const GridFunction& v, const MeasurableSet& s) {
  detail::CompensatedSum acc;
  for (Index i = 0; i < v.size(); ++i) {
    if (s.contains(i)) acc.add(std::abs(v[i]));
  }
  return acc.value() / static_cast<double>(v.size());
}

// Shares one application of T across exponents: A scales with 1/‖f‖_p.
KeyLemmaReport report_from(double response_l1, const GridFunction& f, double e_measure, double f_measure,
                           double p, double r) {
  KeyLemmaReport rep;
  rep.e_measure = e_measure;
  rep.f_measure = f_measure;
  rep.p = p;
  rep.r = r;
  rep.A = response_l1 / (lp_norm(f, p) * std::pow(e_measure, 1.0 / conjugate_exponent(p)));
  rep.rhs = std::pow(1.0 / (p - 1.0) + std::log(2.0 + f_measure / e_measure), r);
  rep.ratio = rep.A / rep.rhs;
  return rep;
}

}  // namespace

KeyLemmaReport key_lemma_ratio(const Operator& op, const MeasurableSet& e, const MeasurableSet& f_set,
                               const GridFunction& f, double p, OrliczParams params) {
  validate(e, f_set, f, p);
  const double response = restricted_l1(extrap::apply(op, f), f_set);
  return report_from(response, f, e.measure(), f_set.measure(), p, params.r());
}

KeyLemmaSweep key_lemma_sweep(const Operator& op, OrliczParams params, const KeyLemmaSweepOptions& options) {
  const DiscreteSpace& space = space_of(op);
  const Index n = space.size();
  for (double p : options.p_values) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("key_lemma_sweep: need 1 < p < inf");
  }
  KeyLemmaSweep sweep;
  sweep.sup_by_p.assign(options.p_values.size(), 0.0);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (Index len : options.e_lengths) {
    if (len == 0 || len > n) continue;
    const MeasurableSet e = MeasurableSet::interval(space, 0, len);

    std::vector<std::pair<std::string, GridFunction>> tests;
    tests.emplace_back("indicator", indicator(e));
    for (Index t = 0; t < options.random_functions; ++t) {
      GridFunction pos(space), sgn(space);
      for (Index i = 0; i < len; ++i) {
        pos[i] = unit(rng);
        sgn[i] = 2.0 * unit(rng) - 1.0;
      }
      tests.emplace_back("random-positive-" + std::to_string(t), std::move(pos));
      tests.emplace_back("random-signed-" + std::to_string(t), std::move(sgn));
    }

    for (Index ratio : options.size_ratios) {
      const Index flen = ratio * len;
      if (ratio == 0 || flen > n) continue;
      // Centre F on E.
      const Index start = (n - (flen - len) / 2) % n;
      const MeasurableSet f_set = MeasurableSet::interval(space, start, flen);
      for (const auto& [name, f] : tests) {
        if (f.is_zero()) continue;
        const double response = restricted_l1(extrap::apply(op, f), f_set);
        for (Index pi = 0; pi < options.p_values.size(); ++pi) {
          KeyLemmaCase c{len, flen, name,
                         report_from(response, f, e.measure(), f_set.measure(), options.p_values[pi], params.r())};
          sweep.sup_by_p[pi] = std::max(sweep.sup_by_p[pi], c.report.ratio);
          sweep.sup = std::max(sweep.sup, c.report.ratio);
          sweep.cases.push_back(std::move(c));
        }
      }
    }
  }
  return sweep;
}

}  // namespace extrap::verifier
