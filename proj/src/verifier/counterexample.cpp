#include "extrap/verifier/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace extrap::verifier {

Counterexample build_counterexample(const CounterexampleSpec& spec) {
  if (spec.N < 2) throw std::invalid_argument("build_counterexample: N must be >= 2");
  if (!(spec.p0 > 1.0) || std::isinf(spec.p0)) throw std::invalid_argument("build_counterexample: need 1 < p0 < inf");
  const OrliczParams params(spec.r);
  const double big_n = static_cast<double>(spec.N);
  const double growth = std::pow(big_n, params.r() * conjugate_exponent(spec.p0));  // |F|/|E|
  const double e_count_real = std::ceil(growth);
  const double n_real = std::exp2(big_n) * e_count_real;
  if (n_real > static_cast<double>(spec.max_points)) {
    throw std::invalid_argument("build_counterexample: N = " + std::to_string(spec.N) + " needs " +
                                std::to_string(static_cast<long double>(n_real)) + " points, above the cap of " +
                                std::to_string(spec.max_points));
  }
  const Index e_count = static_cast<Index>(e_count_real);
  const Index n = static_cast<Index>(n_real);
  const Index f_count = std::max<Index>(1, static_cast<Index>(std::llround(growth * e_count_real)));
  if (e_count + f_count > n) {
    throw std::invalid_argument("build_counterexample: E and F do not fit disjointly for N = " + std::to_string(spec.N));
  }
  const DiscreteSpace space = DiscreteSpace::cyclic(n);
  const double scale = std::exp2(big_n) * std::pow(big_n, -params.r() / (spec.p0 - 1.0));
  RankOneOperator op(scale, MeasurableSet::interval(space, 0, e_count),
                     MeasurableSet::interval(space, e_count, f_count));
  return Counterexample{space, std::move(op), scale};
}

namespace {

double drift(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *lo;
}

}  // namespace

CounterexampleCampaign run_counterexample_campaign(std::span<const int> n_values, double p0, double r,
                                                   std::span<const double> p_values) {
  if (n_values.size() < 2) throw std::invalid_argument("run_counterexample_campaign: need at least two N values");
  const OrliczParams params(r);
  CounterexampleCampaign out;
  out.p0 = p0;
  out.r = r;
  out.p_values.assign(p_values.begin(), p_values.end());

  std::vector<double> norm_p0, endpoint;
  for (int big_n : n_values) {
    const Counterexample ce = build_counterexample({.N = big_n, .p0 = p0, .r = r});
    CounterexampleRow row;
    row.N = big_n;
    row.n = ce.space.size();
    row.e_measure = ce.op.source().measure();
    row.f_measure = ce.op.target().measure();
    row.scale = ce.scale;
    row.norm_p0 = ce.op.closed_form_norm(p0);
    row.endpoint = atom_response(ce.op, ce.op.source(), params);
    for (double p : p_values) row.norms.push_back(ce.op.closed_form_norm(p));
    norm_p0.push_back(row.norm_p0);
    endpoint.push_back(row.endpoint);
    out.rows.push_back(std::move(row));
  }
  out.norm_p0_drift = drift(norm_p0);
  out.endpoint_drift = drift(endpoint);

  std::vector<double> xs;
  for (int big_n : n_values) xs.push_back(static_cast<double>(big_n));
  const double p0_dual = conjugate_exponent(p0);
  for (Index i = 0; i < p_values.size(); ++i) {
    std::vector<double> ys;
    for (const auto& row : out.rows) ys.push_back(row.norms[i]);
    out.fits.push_back(fit_power_law(xs, ys));
    out.predicted_exponents.push_back(r * (p0_dual / p_values[i] - 1.0 / (p0 - 1.0)));
  }
  return out;
}

}  // namespace extrap::verifier
