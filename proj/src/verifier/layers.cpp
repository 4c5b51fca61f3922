#include "extrap/verifier/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace extrap::verifier {

namespace {

double lp_dual(double p) { return conjugate_exponent(p); }

void require_normalized(const GridFunction& f, double p, const char* what) {
  for (double v : f.values()) {
    if (v < 0.0) throw std::invalid_argument(std::string("bilinear_split_check: ") + what + " must be nonnegative");
  }
  if (std::abs(lp_norm(f, p) - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string("bilinear_split_check: ") + what + " is not normalized");
  }
}

}  // namespace

GridFunction LayerDecomposition::piece(int k) const {
  for (const auto& pc : pieces) {
    if (pc.k == k) return pc.piece;
  }
  if (pieces.empty()) throw std::logic_error("LayerDecomposition::piece: empty decomposition");
  return GridFunction(pieces.front().piece.space());
}

GridFunction LayerDecomposition::sum() const {
  if (pieces.empty()) throw std::logic_error("LayerDecomposition::sum: empty decomposition");
  GridFunction out(pieces.front().piece.space());
  for (const auto& pc : pieces) out += pc.piece;
  return out;
}

LayerDecomposition layer_split(const GridFunction& f, Index q) {
  if (q < 1) throw std::invalid_argument("layer_split: q must be >= 1");
  const Index n = f.size();
  const Rearrangement rearr = decreasing_rearrangement(f);
  const double log_n = std::log2(static_cast<double>(n));
  const int k_min = static_cast<int>(std::floor(-log_n / static_cast<double>(q)));
  const double qd = static_cast<double>(q);

  LayerDecomposition out;
  out.q = q;
  for (int k = 0; k >= k_min; --k) {
    LayerPiece pc{.k = k, .piece = GridFunction(f.space())};
    pc.upper_level = rearranged_level(rearr, std::exp2(qd * k));
    pc.lower_level = rearranged_level(rearr, std::exp2(qd * k + qd));
    Index count = 0;
    for (Index x = 0; x < n; ++x) {
      const double a = std::abs(f[x]);
      if (a > pc.lower_level && a <= pc.upper_level) {
        pc.piece[x] = f[x];
        ++count;
      }
    }
    pc.support_measure = static_cast<double>(count) / static_cast<double>(n);
    out.pieces.push_back(std::move(pc));
  }
  return out;
}

double refinement_defect(const LayerDecomposition& coarse, const LayerDecomposition& unit) {
  if (unit.q != 1) throw std::invalid_argument("refinement_defect: second argument must use q = 1");
  const int q = static_cast<int>(coarse.q);
  double defect = 0.0;
  for (const auto& pc : coarse.pieces) {
    GridFunction acc(pc.piece.space());
    for (int kk = q * pc.k; kk <= q * pc.k + q - 1; ++kk) acc += unit.piece(kk);
    for (Index x = 0; x < acc.size(); ++x) defect = std::max(defect, std::abs(pc.piece[x] - acc[x]));
  }
  return defect;
}

double unit_piece_norm_ratio(const GridFunction& f, double p0) {
  if (!(p0 >= 1.0) || std::isinf(p0)) throw std::invalid_argument("unit_piece_norm_ratio: need 1 <= p0 < inf");
  const LayerDecomposition unit = layer_split(f, 1);
  double worst = 0.0;
  for (const auto& pc : unit.pieces) {
    if (pc.upper_level == 0.0) continue;
    const double scale = std::exp2(pc.k / p0) * pc.upper_level;
    worst = std::max(worst, lp_norm(pc.piece, p0) / scale);
  }
  return worst;
}

BilinearReport bilinear_split_check(const Operator& op, const GridFunction& f, const GridFunction& g, double p,
                                    double p0, OrliczParams params) {
  if (!(p0 > 1.0)) throw std::invalid_argument("bilinear_split_check: need p0 > 1");
  if (!(p > 1.0 && p < (1.0 + p0) / 2.0)) {
    throw std::invalid_argument("bilinear_split_check: need 1 < p < (1 + p0)/2");
  }
  const DiscreteSpace& space = space_of(op);
  if (!(f.space() == space) || !(g.space() == space)) {
    throw std::invalid_argument("bilinear_split_check: f, g and T live on different spaces");
  }
  require_normalized(f, p, "f");
  require_normalized(g, lp_dual(p), "g");

  BilinearReport rep;
  rep.q = static_cast<Index>(std::ceil(1.0 / (p - 1.0) - 1e-12));
  rep.p = p;
  rep.p0 = p0;
  rep.r = params.r();
  rep.pairing = inner_product(extrap::apply(op, f), g);

  const LayerDecomposition fl = layer_split(f, rep.q);
  const LayerDecomposition gl = layer_split(g, rep.q);
  rep.f_layers = fl.pieces.size();
  rep.g_layers = gl.pieces.size();

  detail::CompensatedSum total, s2, s3;
  for (const auto& fk : fl.pieces) {
    if (fk.piece.is_zero()) continue;
    const GridFunction tf = extrap::apply(op, fk.piece);
    for (const auto& gl_piece : gl.pieces) {
      if (gl_piece.piece.is_zero()) continue;
      const double term = inner_product(tf, gl_piece.piece);
      total.add(term);
      (fk.k > gl_piece.k ? s2 : s3).add(std::abs(term));
    }
  }
  rep.partition_sum = total.value();
  rep.s2 = s2.value();
  rep.s3 = s3.value();
  rep.s3_over_qr = rep.s3 / std::pow(static_cast<double>(rep.q), rep.r);

  rep.operator_p0_upper = opnorm_lp(op, p0).upper;
  const LayerDecomposition fu = layer_split(f, 1);
  const LayerDecomposition gu = layer_split(g, 1);
  const double p0_dual = lp_dual(p0);
  std::vector<double> gnorm;
  for (const auto& pc : gu.pieces) gnorm.push_back(lp_norm(pc.piece, p0_dual));
  detail::CompensatedSum major;
  for (const auto& a : fu.pieces) {
    const double fa = lp_norm(a.piece, p0);
    if (fa == 0.0) continue;
    for (Index i = 0; i < gu.pieces.size(); ++i) {
      if (a.k > gu.pieces[i].k) major.add(fa * gnorm[i]);
    }
  }
  rep.s2_majorant = rep.operator_p0_upper * major.value();
  return rep;
}

}  // namespace extrap::verifier
