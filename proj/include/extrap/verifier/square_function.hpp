#ifndef EXTRAP_VERIFIER_SQUARE_FUNCTION_HPP
#define EXTRAP_VERIFIER_SQUARE_FUNCTION_HPP

#include <cstdint>
#include <optional>
#include <span>

#include "extrap/space.hpp"

namespace extrap::verifier {

/// (Σ_j h_j²)^{1/2} pointwise.
GridFunction square_function(std::span<const GridFunction> family);

struct KhinchinStats {
  /// mean over trials of ‖Σ ε_j h_j‖₁ / ‖S‖₁.
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  Index trials = 0;
  double square_function_l1 = 0.0;
  /// E|Σ ε_j h_j| integrated exactly, divided by ‖S‖₁; available when at most
  /// `exact_overlap_limit` functions are nonzero at any point.
  std::optional<double> exact_ratio;
};

inline constexpr Index kExactOverlapLimit = 16;

/// Random-sign comparison of ‖Σ ε_j h_j‖₁ against the square function.
KhinchinStats khinchin_check(std::span<const GridFunction> family, Index trials, std::uint64_t seed);

}  // namespace extrap::verifier

#endif  // EXTRAP_VERIFIER_SQUARE_FUNCTION_HPP
