#ifndef EXTRAP_ORLICZ_HPP
#define EXTRAP_ORLICZ_HPP

#include <vector>

#include "extrap/space.hpp"

namespace extrap {

/// Exponent r of the Young function t·log^r(2 + t).
class OrliczParams {
 public:
  explicit OrliczParams(double r);
  double r() const { return r_; }

 private:
  double r_;
};

/// 1/n Σ |f|·log^r(2 + |f|).
double modular(const GridFunction& f, OrliczParams params);

/// inf{λ > 0 : modular(f/λ) ≤ 1}. Returns the L¹ norm exactly when r = 0.
double luxemburg_norm(const GridFunction& f, OrliczParams params);

/// |E|^{-1}·log(1/|E|)^{-r}, the constant value of the atom on E.
double atom_height(double measure, OrliczParams params);

/// The atom |E|^{-1} log(1/|E|)^{-r} χ_E; requires 0 < |E| ≤ 1/2.
GridFunction make_atom(const MeasurableSet& set, OrliczParams params);

/// c·atom(E).
struct AtomTerm {
  double coefficient;
  MeasurableSet set;
};

/// One dyadic slice of the decomposition: f restricted to
/// {f*(2^{-j+1}) < f ≤ f*(2^{-j})}, written as coefficient·piece.
struct DecompositionSlice {
  int j;
  double coefficient;      // j^r 2^{-j} f*(2^{-j})
  GridFunction piece;      // slice / coefficient
  double support_measure;  // ≤ 2^{-j+1}
  double height;           // sup of piece, ≤ j^{-r} 2^{j}
};

struct AtomicDecomposition {
  std::vector<DecompositionSlice> slices;
  /// f restricted to {f ≤ f*(1/2)}; bounded by f*(1/2).
  GridFunction remainder;
  double remainder_bound = 0.0;
  /// Σ c_j over the dyadic slices.
  double coefficient_sum = 0.0;
  /// Σ of atom coefficients in the layer-cake expansion of the remainder.
  double remainder_coefficient_sum = 0.0;

  double total_coefficient_sum() const { return coefficient_sum + remainder_coefficient_sum; }
  GridFunction reconstruct() const;
};

/// Dyadic atomic decomposition of a nonnegative, nonzero f.
AtomicDecomposition atomic_decompose(const GridFunction& f, OrliczParams params);

/// Writes a nonnegative function as Σ coefficient·atom(E_i) using its layer-cake
/// representation; level sets larger than 1/2 are split into two halves.
std::vector<AtomTerm> layer_cake_atoms(const GridFunction& f, OrliczParams params);

/// Σ coefficients of layer_cake_atoms(f), computed without materialising the sets.
double layer_cake_coefficient_sum(const GridFunction& f, OrliczParams params);

/// ‖g‖_{L log^r L} / [(1/(p-1) + log(2 + 1/|E|))^r |E|^{1/p'} ‖g‖_p] with E = supp g.
double embedding_bound_ratio(const GridFunction& g, double p, OrliczParams params);

}  // namespace extrap

#endif  // EXTRAP_ORLICZ_HPP
