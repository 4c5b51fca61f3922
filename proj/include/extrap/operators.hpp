#ifndef EXTRAP_OPERATORS_HPP
#define EXTRAP_OPERATORS_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "extrap/orlicz.hpp"
#include "extrap/space.hpp"

namespace extrap {

namespace detail {
class RealFft;
}

/// (Tf)(x) = 1/n Σ_y K(y) f(x - y). Commutes with every translation.
class ConvolutionOperator {
 public:
  explicit ConvolutionOperator(GridFunction kernel);

  const DiscreteSpace& space() const { return kernel_.space(); }
  const GridFunction& kernel() const { return kernel_; }

  /// FFT-based application.
  GridFunction apply(const GridFunction& f) const;
  /// O(n²) direct summation; bitwise translation-equivariant.
  GridFunction apply_direct(const GridFunction& f) const;
  /// Convolution with the reflected kernel K(-y).
  ConvolutionOperator adjoint() const;

  /// m(ξ) = 1/n Σ_y K(y) e^{-2πi⟨ξ,y⟩}, all n frequencies in row-major order,
  /// so that (Tf)^ = m·f^.
  std::vector<std::complex<double>> multiplier() const;
  double max_abs_multiplier() const;
  /// 1/n Σ|K|: the exact L¹ and L^∞ operator norm.
  double kernel_l1() const;

 private:
  GridFunction kernel_;
  std::shared_ptr<const detail::RealFft> fft_;
  std::shared_ptr<const std::vector<std::complex<double>>> half_multiplier_;
};

/// Tf = s·(1/n Σ_{x∈E} f(x))·χ_F.
class RankOneOperator {
 public:
  RankOneOperator(double scale, MeasurableSet source, MeasurableSet target);

  const DiscreteSpace& space() const { return source_.space(); }
  double scale() const { return scale_; }
  const MeasurableSet& source() const { return source_; }
  const MeasurableSet& target() const { return target_; }

  GridFunction apply(const GridFunction& f) const;
  /// Swaps the roles of E and F.
  RankOneOperator adjoint() const { return RankOneOperator(scale_, target_, source_); }
  /// s·|E|^{1/p'}·|F|^{1/p}.
  double closed_form_norm(double p) const;

 private:
  double scale_;
  MeasurableSet source_;
  MeasurableSet target_;
};

using Operator = std::variant<ConvolutionOperator, RankOneOperator>;

GridFunction apply(const Operator& op, const GridFunction& f);
Operator adjoint(const Operator& op);
const DiscreteSpace& space_of(const Operator& op);

/// Certified lower bound (attained by `witness`) and an upper bound for ‖T‖_{p→p}.
struct NormReport {
  double p = 1.0;
  double lower = 0.0;
  double upper = kInfinity;
  std::string method;
  int iterations = 0;
  bool converged = true;
  std::optional<GridFunction> witness;
};

struct PowerIterationOptions {
  int max_iterations = 10000;
  double relative_tolerance = 1e-10;
  /// Consecutive sub-tolerance steps required to stop.
  int patience = 5;
  int random_restarts = 3;
  std::uint64_t seed = 0x5eed;
  bool parallel = true;
};

/// ‖Tf‖_p / ‖f‖_p, re-evaluated from scratch.
double norm_ratio(const Operator& op, const GridFunction& f, double p);

/// Nonlinear power iteration f ← dual_{p'}(T* dual_p(Tf)) from the constant
/// function, a point mass and seeded random starts; returns the best witness.
NormReport power_iteration(const Operator& op, double p, const PowerIterationOptions& options = {});

/// Interpolated bound b0^{1-θ} b1^{θ}, 1/p = (1-θ)/p0 + θ/p1.
double interpolate_bound(double p0, double b0, double p1, double b1, double p);

/// Relative slack added to upper bounds assembled from floating-point closed forms.
inline constexpr double kUpperBoundSlack = 1e-12;

/// Operator-norm estimate on L^p. Closed forms at p ∈ {1, 2, ∞} for
/// convolutions and at every p for rank-one operators; elsewhere a power-iteration
/// lower bound and a complex-interpolation upper bound.
NormReport opnorm_lp(const Operator& op, double p, const PowerIterationOptions& options = {});

/// Family of sets searched when estimating the L log^r L → L¹ norm.
struct SetSearch {
  /// Longest contiguous block tried; blocks are further capped at measure 1/2.
  Index max_interval_length = 256;
  /// Starting positions of blocks (ignored for convolutions, which are translation invariant).
  Index interval_stride = 1;
  /// Level sets {|K| ≥ t} of a convolution kernel, at this many dyadic measures.
  bool kernel_level_sets = true;
  /// Seeded random sets per dyadic measure 2^{-k}, k = 1..log2(n).
  Index random_sets_per_measure = 4;
  std::uint64_t seed = 0x5eed;
};

struct EndpointReport {
  /// max over searched E of ‖T atom(E)‖₁; a lower bound only.
  double lower = 0.0;
  bool upper_certified = false;
  std::optional<MeasurableSet> maximizer;
  Index sets_searched = 0;
  std::string method = "atom-search";
};

/// ‖T(atom_E)‖₁ for a single set.
double atom_response(const Operator& op, const MeasurableSet& set, OrliczParams params);

EndpointReport llogl_to_l1_norm(const Operator& op, OrliczParams params, const SetSearch& search = {});

}  // namespace extrap

#endif  // EXTRAP_OPERATORS_HPP
