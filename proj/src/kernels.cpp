#include "extrap/kernels.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace extrap::kernels {

namespace {

// Σ_{|ξ|≤m} e^{2πiξj/n} on Z_n.
double dirichlet_1d(Index j, Index n, Index m) {
  if (2 * m + 1 >= n) return (j == 0) ? static_cast<double>(n) : 0.0;
  if (j == 0) return static_cast<double>(2 * m + 1);
  const double x = std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return std::sin(static_cast<double>(2 * m + 1) * x) / std::sin(x);
}

// Σ_{|ξ|≤m} (1 - |ξ|/(m+1)) e^{2πiξj/n}, evaluated termwise so windows wider than n alias correctly.
double fejer_1d(Index j, Index n, Index m) {
  const double mm = static_cast<double>(m + 1);
  double acc = 1.0;
  for (Index xi = 1; xi <= m; ++xi) {
    const Index k = (xi * j) % n;
    acc += 2.0 * (1.0 - static_cast<double>(xi) / mm) *
           std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  return acc;
}

template <typename Profile>
GridFunction tensor_kernel(const DiscreteSpace& space, Profile&& profile) {
  GridFunction k(space);
  for (Index x = 0; x < space.size(); ++x) {
    const auto c = space.coordinates(x);
    double v = 1.0;
    for (Index a = 0; a < c.size(); ++a) v *= profile(c[a], space.dims()[a]);
    k[x] = v;
  }
  return k;
}

Index parse_index(std::string_view text, std::string_view name) {
  Index value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("kernel '" + std::string(name) + "': expected an integer parameter");
  }
  return value;
}

}  // namespace

GridFunction dirac(const DiscreteSpace& space) {
  GridFunction k(space);
  k[0] = static_cast<double>(space.size());
  return k;
}

GridFunction constant(const DiscreteSpace& space) { return GridFunction::constant(space, 1.0); }

GridFunction dirichlet(const DiscreteSpace& space, Index m) {
  return tensor_kernel(space, [m](Index j, Index n) { return dirichlet_1d(j, n, m); });
}

GridFunction fejer(const DiscreteSpace& space, Index m) {
  return tensor_kernel(space, [m](Index j, Index n) { return fejer_1d(j, n, m); });
}

GridFunction hilbert(const DiscreteSpace& space) {
  if (space.rank() != 1) throw std::invalid_argument("hilbert kernel is defined on cyclic groups only");
  const Index n = space.size();
  GridFunction k(space);
  for (Index j = 1; j < n; ++j) {
    if (2 * j == n) continue;
    k[j] = 1.0 / std::tan(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  // Enforce exact oddness K(n-j) = -K(j).
  for (Index j = 1; 2 * j < n; ++j) k[n - j] = -k[j];
  return k;
}

GridFunction random(const DiscreteSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  GridFunction k(space);
  for (Index i = 0; i < k.size(); ++i) k[i] = normal(rng);
  return k;
}

GridFunction by_name(const DiscreteSpace& space, std::string_view name) {
  const auto colon = name.find(':');
  const std::string_view head = name.substr(0, colon);
  const std::string_view arg = (colon == std::string_view::npos) ? std::string_view{} : name.substr(colon + 1);
  auto require_arg = [&] {
    if (arg.empty()) throw std::invalid_argument("kernel '" + std::string(name) + "' needs a ':' parameter");
  };
  if (head == "dirac") return dirac(space);
  if (head == "constant") return constant(space);
  if (head == "hilbert") return hilbert(space);
  if (head == "dirichlet") {
    require_arg();
    return dirichlet(space, parse_index(arg, name));
  }
  if (head == "fejer") {
    require_arg();
    return fejer(space, parse_index(arg, name));
  }
  if (head == "random") {
    require_arg();
    return random(space, parse_index(arg, name));
  }
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

}  // namespace extrap::kernels
