#ifndef EXTRAP_VERIFIER_LAYERS_HPP
#define EXTRAP_VERIFIER_LAYERS_HPP

#include <vector>

#include "extrap/operators.hpp"

namespace extrap::verifier {

/// f restricted to {f*(2^{qk+q}) < |f| ≤ f*(2^{qk})}.
struct LayerPiece {
  int k = 0;
  GridFunction piece;
  double upper_level = 0.0;  // f*(2^{qk})
  double lower_level = 0.0;  // f*(2^{qk+q}), zero once 2^{qk+q} > 1
  double support_measure = 0.0;
};

struct LayerDecomposition {
  Index q = 1;
  /// k = 0, -1, …, down to the first k with 2^{qk} ≤ 1/n.
  std::vector<LayerPiece> pieces;

  /// The piece with index k, or the zero function when k is out of range.
  GridFunction piece(int k) const;
  GridFunction sum() const;
  int min_k() const { return pieces.empty() ? 0 : pieces.back().k; }
};

LayerDecomposition layer_split(const GridFunction& f, Index q);

/// max_k max_x |f_{k,q} - Σ_{k'=qk}^{qk+q-1} f_{k',1}|.
double refinement_defect(const LayerDecomposition& coarse, const LayerDecomposition& unit);

/// max over unit pieces of ‖f_{k,1}‖_{p0} / (2^{k/p0} f*(2^k)); at most 2^{1/p0}.
double unit_piece_norm_ratio(const GridFunction& f, double p0);

struct BilinearReport {
  Index q = 1;
  double p = 0.0;
  double p0 = 0.0;
  double r = 0.0;
  double pairing = 0.0;        // ⟨Tf, g⟩
  double partition_sum = 0.0;  // Σ_{k,l} ⟨T f_{k,q}, g_{l,q}⟩
  double s2 = 0.0;             // Σ_{k>l} |⟨T f_{k,q}, g_{l,q}⟩|
  double s3 = 0.0;             // Σ_{k≤l} |⟨T f_{k,q}, g_{l,q}⟩|
  double s3_over_qr = 0.0;
  /// ‖T‖_{p0} · Σ_{k'>l'} ‖f_{k',1}‖_{p0} ‖g_{l',1}‖_{p0'}: a Hölder majorant of s2.
  double s2_majorant = 0.0;
  double operator_p0_upper = 0.0;
  Index f_layers = 0;
  Index g_layers = 0;
};

/// Requires ‖f‖_p = ‖g‖_{p'} = 1, f, g ≥ 0 and 1 < p < (1+p0)/2. Uses q = ⌈1/(p-1)⌉.
BilinearReport bilinear_split_check(const Operator& op, const GridFunction& f, const GridFunction& g, double p,
                                    double p0, OrliczParams params);

}  // namespace extrap::verifier

#endif  // EXTRAP_VERIFIER_LAYERS_HPP
