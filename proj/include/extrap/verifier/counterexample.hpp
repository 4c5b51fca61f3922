#ifndef EXTRAP_VERIFIER_COUNTEREXAMPLE_HPP
#define EXTRAP_VERIFIER_COUNTEREXAMPLE_HPP

#include <span>
#include <vector>

#include "extrap/operators.hpp"
#include "extrap/verifier/growth.hpp"

namespace extrap::verifier {

struct CounterexampleSpec {
  int N = 6;
  double p0 = 2.0;
  double r = 1.0;
  /// Largest admissible point count.
  Index max_points = Index{1} << 26;
};

/// Rank-one operator s⟨f, χ_E⟩χ_F with |E| = 2^{-N}, |F| = N^{r p0'} 2^{-N},
/// s = 2^N N^{-r/(p0-1)}, on n = 2^N ⌈N^{r p0'}⌉ points.
struct Counterexample {
  DiscreteSpace space;
  RankOneOperator op;
  double scale;
};

Counterexample build_counterexample(const CounterexampleSpec& spec);

struct CounterexampleRow {
  int N = 0;
  Index n = 0;
  double e_measure = 0.0;
  double f_measure = 0.0;
  double scale = 0.0;
  double norm_p0 = 0.0;
  /// ‖T atom(E)‖₁.
  double endpoint = 0.0;
  /// ‖T‖_{p→p} for each campaign exponent.
  std::vector<double> norms;
};

struct CounterexampleCampaign {
  double p0 = 2.0;
  double r = 1.0;
  std::vector<double> p_values;
  std::vector<CounterexampleRow> rows;
  /// Fitted exponent of N in ‖T‖_{p→p}, per p.
  std::vector<PowerLawFit> fits;
  /// r(p0'/p - 1/(p0-1)).
  std::vector<double> predicted_exponents;
  /// (max - min)/min across N.
  double norm_p0_drift = 0.0;
  double endpoint_drift = 0.0;
};

CounterexampleCampaign run_counterexample_campaign(std::span<const int> n_values, double p0, double r,
                                                   std::span<const double> p_values);

}  // namespace extrap::verifier

#endif  // EXTRAP_VERIFIER_COUNTEREXAMPLE_HPP
