#ifndef EXTRAP_VERIFIER_TRANSLATES_HPP
#define EXTRAP_VERIFIER_TRANSLATES_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "extrap/space.hpp"

namespace extrap::verifier {

struct TranslateConfig {
  /// Density constant: N = round(ε/|F|).
  double epsilon = 0.01;
  /// Draws allowed per step before the step is declared stalled.
  Index max_attempts = 1000;
  std::uint64_t seed = 0x5eed;
  /// Halve ε and restart when a step stalls.
  bool auto_shrink = true;
  int max_shrinks = 10;
  /// Extra uniform draws per step used only to measure the acceptance rate.
  Index acceptance_trials = 0;
};

/// round(ε/|F|).
Index translate_count(double epsilon, double f_measure);

/// Record of the J-th translate Ω_J.
struct TranslateStep {
  GroupElement omega;
  /// ⟨χ_{∪_{j<J} Ω_j(F)}, h∘Ω_J⟩, evaluated directly for the chosen Ω_J.
  double disjoint_h = 0.0;
  /// ⟨(Σ_{j<J} |f|∘Ω_j)^{p-1}, |f|∘Ω_J⟩, evaluated directly.
  double disjoint_f = 0.0;
  Index attempts = 0;

  /// Group averages of the two quantities over all n elements, by full summation,
  /// next to their Fubini closed forms |∪Ω_j(F)|·‖h‖₁ and ‖S^{p-1}‖₁·‖f‖₁.
  double average_h = 0.0;
  double average_h_closed_form = 0.0;
  double average_f = 0.0;
  double average_f_closed_form = 0.0;
  /// Fraction of all group elements that satisfy both conditions.
  double exact_acceptance = 1.0;
  Index trial_draws = 0;
  Index trial_accepted = 0;
};

struct TranslateFamily {
  double epsilon = 0.0;
  Index count = 0;  // N; elements hold Ω_0..Ω_N
  double p = 0.0;
  /// ‖h‖₁ = A·|E|^{1/p'}.
  double A = 0.0;
  double e_measure = 0.0;
  double f_measure = 0.0;
  /// ½·A·|E|^{1/p'}: the per-step bound on disjoint_h.
  double h_bound = 0.0;
  /// Averaged-condition targets: (1/8)·A·|E|^{1/p} as printed, (1/8)·A·|E|^{1/p'} as
  /// normalised by A's definition, and 1/4 for the f-condition.
  double average_h_target_p = 0.0;
  double average_h_target_pdual = 0.0;
  double average_f_target = 0.25;
  int shrinks = 0;
  std::vector<GroupElement> elements;
  std::vector<TranslateStep> steps;  // steps[J], J = 0..N

  bool conditions_hold() const;
  Index total_trial_draws() const;
  Index total_trial_accepted() const;
};

/// Raised when a step exhausts max_attempts and no shrink is allowed.
class TranslationStalled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds Ω_0, …, Ω_N by rejection sampling so that for every J
///   ⟨χ_{∪_{j<J}Ω_j(F)}, h∘Ω_J⟩ ≤ ½‖h‖₁  and  ⟨(Σ_{j<J}|f|∘Ω_j)^{p-1}, |f|∘Ω_J⟩ ≤ 1.
/// Requires ‖f‖_p = 1, supp f ⊆ E, h ≥ 0 and supp h ⊆ F.
TranslateFamily construct_translates(const GridFunction& h, const GridFunction& f, const MeasurableSet& e,
                                     const MeasurableSet& f_set, double p, const TranslateConfig& cfg);

/// Telescoped square-function growth along a constructed family.
struct TelescopingReport {
  /// ‖(Σ_{j≤J} (h∘Ω_j)²)^{1/2}‖₁ for J = 0..N.
  std::vector<double> square_l1;
  /// ⟨h∘Ω_J, 1 - χ_{∪_{j<J}Ω_j(F)}⟩ for J = 0..N (entry 0 unused).
  std::vector<double> fresh_mass;
  bool steps_hold = true;
  double telescoped_bound = 0.0;  // ½·N·A·|E|^{1/p'}
  bool bound_holds = true;
};

TelescopingReport telescoping_check(const GridFunction& h, const MeasurableSet& f_set,
                                    const TranslateFamily& family);

/// h∘Ω_j for every element of the family.
std::vector<GridFunction> translated_family(const GridFunction& h, const TranslateFamily& family);

}  // namespace extrap::verifier

#endif  // EXTRAP_VERIFIER_TRANSLATES_HPP
