#include "extrap/verifier/square_function.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace extrap::verifier {

namespace {

void require_common_space(std::span<const GridFunction> family, const char* what) {
  if (family.empty()) throw std::invalid_argument(std::string(what) + ": empty family");
  for (const auto& h : family) {
    if (!(h.space() == family.front().space())) {
      throw std::invalid_argument(std::string(what) + ": functions live on different spaces");
    }
  }
}

// E|Σ_j ε_j a_j| for the nonzero values a_j at one point; sign-flip symmetry fixes ε_0 = +1.
double exact_sign_average(const std::vector<double>& a) {
  if (a.size() == 1) return std::abs(a[0]);
  const Index patterns = Index{1} << (a.size() - 1);
  double acc = 0.0;
  for (Index mask = 0; mask < patterns; ++mask) {
    double s = a[0];
    for (Index j = 1; j < a.size(); ++j) s += ((mask >> (j - 1)) & 1) ? -a[j] : a[j];
    acc += std::abs(s);
  }
  return acc / static_cast<double>(patterns);
}

}  // namespace

GridFunction square_function(std::span<const GridFunction> family) {
  require_common_space(family, "square_function");
  GridFunction out(family.front().space());
  for (Index x = 0; x < out.size(); ++x) {
    double acc = 0.0;
    for (const auto& h : family) acc += h[x] * h[x];
    out[x] = std::sqrt(acc);
  }
  return out;
}

KhinchinStats khinchin_check(std::span<const GridFunction> family, Index trials, std::uint64_t seed) {
  require_common_space(family, "khinchin_check");
  if (trials == 0) throw std::invalid_argument("khinchin_check: trials must be >= 1");
  const Index n = family.front().size();

  KhinchinStats stats;
  stats.trials = trials;
  stats.square_function_l1 = lp_norm(square_function(family), 1.0);
  if (stats.square_function_l1 == 0.0) throw std::invalid_argument("khinchin_check: family is identically zero");

  // Only points where some h_j is nonzero contribute.
  std::vector<Index> active;
  Index max_overlap = 0;
  for (Index x = 0; x < n; ++x) {
    Index k = 0;
    for (const auto& h : family) k += (h[x] != 0.0) ? 1 : 0;
    if (k > 0) active.push_back(x);
    max_overlap = std::max(max_overlap, k);
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> signs(family.size());
  detail::CompensatedSum ratio_sum;
  stats.min_ratio = kInfinity;
  for (Index t = 0; t < trials; ++t) {
    for (double& s : signs) s = coin(rng) ? 1.0 : -1.0;
    detail::CompensatedSum l1;
    for (Index x : active) {
      double v = 0.0;
      for (Index j = 0; j < family.size(); ++j) v += signs[j] * family[j][x];
      l1.add(std::abs(v));
    }
    const double ratio = (l1.value() / static_cast<double>(n)) / stats.square_function_l1;
    ratio_sum.add(ratio);
    stats.min_ratio = std::min(stats.min_ratio, ratio);
    stats.max_ratio = std::max(stats.max_ratio, ratio);
  }
  stats.mean_ratio = ratio_sum.value() / static_cast<double>(trials);

  if (max_overlap <= kExactOverlapLimit) {
    detail::CompensatedSum exact;
    std::vector<double> a;
    for (Index x : active) {
      a.clear();
      for (const auto& h : family) {
        if (h[x] != 0.0) a.push_back(h[x]);
      }
      exact.add(exact_sign_average(a));
    }
    stats.exact_ratio = (exact.value() / static_cast<double>(n)) / stats.square_function_l1;
  }
  return stats;
}

}  // namespace extrap::verifier
