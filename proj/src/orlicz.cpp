#include "extrap/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace extrap {

namespace {

double log_power(double t, double r) {
  const double l = std::log(2.0 + t);
  if (r == 1.0) return l;
  if (r == 2.0) return l * l;
  return std::pow(l, r);
}

// modular(s·f) and its derivative in s.
struct ModularValue {
  double value;
  double slope;
};

ModularValue scaled_modular(std::span<const double> values, double s, double r) {
  detail::CompensatedSum phi, dphi;
  for (double v : values) {
    const double a = std::abs(v);
    if (a == 0.0) continue;
    const double t = s * a;
    const double l = std::log(2.0 + t);
    const double lr = (r == 1.0) ? l : std::pow(l, r);
    phi.add(t * lr);
    // d/ds [t log^r(2+t)] = a·[log^r + r t log^{r-1}/(2+t)]
    dphi.add(a * (lr + r * t * (lr / l) / (2.0 + t)));
  }
  const double n = static_cast<double>(values.size());
  return {phi.value() / n, dphi.value() / n};
}

// Splits a level set of `count` points into chunks of at most floor(n/2) points.
template <typename Visit>
void for_each_chunk(Index count, Index n, Visit&& visit) {
  const Index cap = n / 2;
  const Index chunks = (count + cap - 1) / cap;
  const Index base = count / chunks;
  const Index extra = count % chunks;
  Index offset = 0;
  for (Index c = 0; c < chunks; ++c) {
    const Index size = base + (c < extra ? 1 : 0);
    visit(offset, size);
    offset += size;
  }
}

double chunk_cost(Index size, Index n, double r) {
  const double mu = static_cast<double>(size) / static_cast<double>(n);
  return mu * std::pow(std::log(1.0 / mu), r);
}

}  // namespace

OrliczParams::OrliczParams(double r) : r_(r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("OrliczParams: r must be a finite nonnegative number");
  }
}

double modular(const GridFunction& f, OrliczParams params) {
  detail::CompensatedSum acc;
  for (double v : f.values()) {
    const double a = std::abs(v);
    if (a != 0.0) acc.add(a * log_power(a, params.r()));
  }
  return acc.value() / static_cast<double>(f.size());
}

double luxemburg_norm(const GridFunction& f, OrliczParams params) {
  const double r = params.r();
  const double l1 = lp_norm(f, 1.0);
  if (l1 == 0.0) return 0.0;
  // modular(f/λ) = ‖f‖₁/λ when r = 0.
  if (r == 0.0) return l1;

  const auto values = f.values();
  auto phi = [&](double s) { return scaled_modular(values, s, r); };

  // Bracket the root of modular(s·f) = 1 in the scale s = 1/λ.
  double lo = 1.0 / l1;
  double hi = lo;
  ModularValue at_hi = phi(hi);
  while (at_hi.value < 1.0) {
    lo = hi;
    hi *= 2.0;
    at_hi = phi(hi);
  }
  while (phi(lo).value > 1.0) lo *= 0.5;

  // Safeguarded Newton. s ↦ modular(s·f) is increasing and convex, so Newton
  // steps taken from the right of the root stay to the right of it.
  double s = hi;
  ModularValue cur = at_hi;
  for (int it = 0; it < 200; ++it) {
    if (cur.value == 1.0) {
      lo = hi = s;
      break;
    }
    if (cur.value > 1.0) {
      hi = s;
    } else {
      lo = s;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    double next = s - (cur.value - 1.0) / cur.slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 2.0 * std::numeric_limits<double>::epsilon() * s) {
      // Converged; make sure lo sits on the feasible side.
      const double below = s * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
      if (phi(below).value <= 1.0) lo = std::max(lo, below);
      break;
    }
    s = next;
    cur = phi(s);
  }
  return 1.0 / lo;
}

double atom_height(double measure, OrliczParams params) {
  if (!(measure > 0.0 && measure <= 0.5)) {
    throw std::invalid_argument("atom: set measure must lie in (0, 1/2]");
  }
  return 1.0 / (measure * std::pow(std::log(1.0 / measure), params.r()));
}

GridFunction make_atom(const MeasurableSet& set, OrliczParams params) {
  const double height = atom_height(set.measure(), params);
  GridFunction out(set.space());
  for (Index i = 0; i < out.size(); ++i) {
    if (set.contains(i)) out[i] = height;
  }
  return out;
}

GridFunction AtomicDecomposition::reconstruct() const {
  GridFunction out(remainder);
  for (const auto& s : slices) {
    for (Index i = 0; i < out.size(); ++i) out[i] += s.coefficient * s.piece[i];
  }
  return out;
}

AtomicDecomposition atomic_decompose(const GridFunction& f, OrliczParams params) {
  for (double v : f.values()) {
    if (v < 0.0) throw std::invalid_argument("atomic_decompose: function must be nonnegative");
  }
  if (f.is_zero()) throw std::invalid_argument("atomic_decompose: function is identically zero");

  const Index n = f.size();
  const double r = params.r();
  const Rearrangement rearr = decreasing_rearrangement(f);
  const int top = static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));

  const double half_level = rearranged_level(rearr, 0.5);
  AtomicDecomposition out{.slices = {}, .remainder = GridFunction(f.space())};
  for (Index i = 0; i < n; ++i) {
    if (f[i] <= half_level) out.remainder[i] = f[i];
  }
  out.remainder_bound = half_level;

  for (int j = 2; j <= top; ++j) {
    const double upper = rearranged_level(rearr, std::ldexp(1.0, -j));
    const double lower = rearranged_level(rearr, std::ldexp(1.0, -j + 1));
    GridFunction piece(f.space());
    Index count = 0;
    double peak = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (f[i] > lower && f[i] <= upper) {
        piece[i] = f[i];
        peak = std::max(peak, f[i]);
        ++count;
      }
    }
    if (count == 0) continue;
    const double c = std::pow(static_cast<double>(j), r) * std::ldexp(upper, -j);
    piece *= 1.0 / c;
    out.slices.push_back(DecompositionSlice{
        .j = j,
        .coefficient = c,
        .piece = std::move(piece),
        .support_measure = static_cast<double>(count) / static_cast<double>(n),
        .height = peak / c,
    });
    out.coefficient_sum += c;
  }
  if (!out.remainder.is_zero()) {
    out.remainder_coefficient_sum = layer_cake_coefficient_sum(out.remainder, params);
  }
  return out;
}

std::vector<AtomTerm> layer_cake_atoms(const GridFunction& f, OrliczParams params) {
  const Index n = f.size();
  if (n < 2) throw std::invalid_argument("layer_cake_atoms: atoms need a space of size >= 2");
  const double r = params.r();
  std::vector<double> levels;
  for (double v : f.values()) {
    if (v < 0.0) throw std::invalid_argument("layer_cake_atoms: function must be nonnegative");
    if (v > 0.0) levels.push_back(v);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<AtomTerm> terms;
  double previous = 0.0;
  for (double level : levels) {
    std::vector<Index> members;
    for (Index i = 0; i < n; ++i) {
      if (f[i] >= level) members.push_back(i);
    }
    const double step = level - previous;
    for_each_chunk(members.size(), n, [&](Index offset, Index size) {
      std::span<const Index> chunk(members.data() + offset, size);
      terms.push_back(AtomTerm{step * chunk_cost(size, n, r),
                               MeasurableSet::from_indices(f.space(), chunk)});
    });
    previous = level;
  }
  return terms;
}

double layer_cake_coefficient_sum(const GridFunction& f, OrliczParams params) {
  const Index n = f.size();
  if (n < 2) throw std::invalid_argument("layer_cake_atoms: atoms need a space of size >= 2");
  std::vector<double> sorted(f.values().begin(), f.values().end());
  std::sort(sorted.begin(), sorted.end());
  detail::CompensatedSum acc;
  double previous = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double level = sorted[i];
    if (level < 0.0) throw std::invalid_argument("layer_cake_atoms: function must be nonnegative");
    if (level <= previous) continue;
    // {f ≥ level} holds every point from rank i upward.
    double cost = 0.0;
    for_each_chunk(n - i, n, [&](Index, Index size) { cost += chunk_cost(size, n, params.r()); });
    acc.add((level - previous) * cost);
    previous = level;
  }
  return acc.value();
}

double embedding_bound_ratio(const GridFunction& g, double p, OrliczParams params) {
  if (!(p > 1.0)) throw std::invalid_argument("embedding_bound_ratio: p must exceed 1");
  if (g.is_zero()) throw std::invalid_argument("embedding_bound_ratio: g is identically zero");
  const double e = support(g).measure();
  const double scale = std::pow(1.0 / (p - 1.0) + std::log(2.0 + 1.0 / e), params.r()) *
                       std::pow(e, 1.0 / conjugate_exponent(p)) * lp_norm(g, p);
  return luxemburg_norm(g, params) / scale;
}

}  // namespace extrap
