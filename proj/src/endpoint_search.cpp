#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "extrap/operators.hpp"

namespace extrap {

double atom_response(const Operator& op, const MeasurableSet& set, OrliczParams params) {
  return lp_norm(extrap::apply(op, make_atom(set, params)), 1.0);
}

EndpointReport llogl_to_l1_norm(const Operator& op, OrliczParams params, const SetSearch& search) {
  const DiscreteSpace& space = space_of(op);
  const Index n = space.size();
  const Index half = n / 2;
  EndpointReport report;
  if (half == 0) return report;

  auto consider = [&](const MeasurableSet& set) {
    if (set.count() == 0 || set.count() > half) return;
    ++report.sets_searched;
    const double v = atom_response(op, set, params);
    if (v > report.lower || !report.maximizer) {
      report.lower = v;
      report.maximizer = set;
    }
  };

  const bool invariant = std::holds_alternative<ConvolutionOperator>(op);
  const Index max_length = std::min(search.max_interval_length, half);
  const Index stride = std::max<Index>(search.interval_stride, 1);
  for (Index start = 0; start < (invariant ? 1 : n); start += stride) {
    for (Index length = 1; length <= max_length; ++length) {
      consider(MeasurableSet::interval(space, start, length));
    }
  }

  if (const auto* rank_one = std::get_if<RankOneOperator>(&op)) {
    consider(rank_one->source());
    consider(rank_one->target());
  }

  if (const auto* conv = std::get_if<ConvolutionOperator>(&op); conv && search.kernel_level_sets) {
    // Top-k points of |K| at dyadic k; ties in |K| broken by index.
    const Rearrangement rearr = decreasing_rearrangement(conv->kernel());
    for (Index k = 1; k <= half; k *= 2) {
      consider(MeasurableSet::from_indices(space, rearr.order().subspan(0, k)));
    }
  }

  if (search.random_sets_per_measure > 0) {
    std::mt19937_64 rng(search.seed);
    std::vector<Index> pool(n);
    for (Index k = half; k >= 1; k /= 2) {
      for (Index t = 0; t < search.random_sets_per_measure; ++t) {
        std::iota(pool.begin(), pool.end(), Index{0});
        // Partial Fisher-Yates: the first k entries form a uniform k-subset.
        for (Index i = 0; i < k; ++i) {
          std::uniform_int_distribution<Index> pick(i, n - 1);
          std::swap(pool[i], pool[pick(rng)]);
        }
        consider(MeasurableSet::from_indices(space, std::span<const Index>(pool.data(), k)));
      }
    }
  }
  return report;
}

}  // namespace extrap
