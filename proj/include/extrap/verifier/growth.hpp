#ifndef EXTRAP_VERIFIER_GROWTH_HPP
#define EXTRAP_VERIFIER_GROWTH_HPP

#include <span>
#include <vector>

#include "extrap/operators.hpp"

namespace extrap::verifier {

/// Least-squares fit log y = intercept + exponent·log x.
struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual in log space.
  double residual = 0.0;
};

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct GrowthSample {
  double p;
  double norm;
};

struct GrowthFit {
  std::vector<GrowthSample> samples;
  std::vector<NormReport> reports;
  /// r̂ in ‖T‖_{p→p} ≈ C (p-1)^{-r̂}.
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double hint_deviation = 0.0;
  bool all_converged = true;
};

/// Regresses log(norm) on log(1/(p-1)); needs at least four samples with p > 1.
GrowthFit fit_growth_samples(std::span<const GrowthSample> samples, double r_hint = 0.0);

/// Certified lower bounds of ‖T‖_{p→p} over the grid, then fit_growth_samples.
GrowthFit fit_growth_exponent(const Operator& op, std::span<const double> p_grid, OrliczParams r_hint,
                              const PowerIterationOptions& options = {});

}  // namespace extrap::verifier

#endif  // EXTRAP_VERIFIER_GROWTH_HPP
