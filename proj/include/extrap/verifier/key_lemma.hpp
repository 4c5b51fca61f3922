#ifndef EXTRAP_VERIFIER_KEY_LEMMA_HPP
#define EXTRAP_VERIFIER_KEY_LEMMA_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "extrap/operators.hpp"

namespace extrap::verifier {

struct KeyLemmaReport {
  double e_measure = 0.0;
  double f_measure = 0.0;
  double p = 0.0;
  double r = 0.0;
  /// ‖χ_F T f‖₁ = A·|E|^{1/p'} with f normalised in L^p.
  double A = 0.0;
  /// (1/(p-1) + log(2 + |F|/|E|))^r.
  double rhs = 0.0;
  double ratio = 0.0;
};

/// A and A/rhs for one (E, F, f). f must be supported on E, 0 < |E| ≤ |F|.
KeyLemmaReport key_lemma_ratio(const Operator& op, const MeasurableSet& e, const MeasurableSet& f_set,
                               const GridFunction& f, double p, OrliczParams params);

struct KeyLemmaSweepOptions {
  std::vector<double> p_values{1.05, 1.1, 1.25, 1.5};
  /// |F|/|E| for the interval families.
  std::vector<Index> size_ratios{1, 4, 16, 64};
  /// Lengths of the interval E.
  std::vector<Index> e_lengths{8, 32};
  /// Seeded random test functions on E in addition to the normalised indicator.
  Index random_functions = 2;
  std::uint64_t seed = 0x5eed;
};

struct KeyLemmaCase {
  Index e_length = 0;
  Index f_length = 0;
  std::string test_function;
  KeyLemmaReport report;
};

struct KeyLemmaSweep {
  std::vector<KeyLemmaCase> cases;
  /// sup of the ratio for each entry of options.p_values.
  std::vector<double> sup_by_p;
  double sup = 0.0;
};

/// E = [0, ℓ), F = the centred block of length ρℓ containing E.
KeyLemmaSweep key_lemma_sweep(const Operator& op, OrliczParams params, const KeyLemmaSweepOptions& options);

}  // namespace extrap::verifier

#endif  // EXTRAP_VERIFIER_KEY_LEMMA_HPP
