#include "extrap/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace extrap {

namespace detail {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// DiscreteSpace

DiscreteSpace::DiscreteSpace(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw std::invalid_argument("DiscreteSpace: at least one cyclic factor required");
  }
  strides_.assign(dims_.size(), 1);
  n_ = 1;
  for (Index a = dims_.size(); a-- > 0;) {
    if (dims_[a] == 0) {
      throw std::invalid_argument("DiscreteSpace: cyclic factors must be positive");
    }
    strides_[a] = n_;
    n_ *= dims_[a];
  }
}

std::vector<Index> DiscreteSpace::coordinates(Index flat) const {
  std::vector<Index> c(dims_.size());
  for (Index a = 0; a < dims_.size(); ++a) {
    c[a] = (flat / strides_[a]) % dims_[a];
  }
  return c;
}

Index DiscreteSpace::flat_index(std::span<const Index> coords) const {
  if (coords.size() != dims_.size()) {
    throw std::invalid_argument("flat_index: coordinate rank mismatch");
  }
  Index flat = 0;
  for (Index a = 0; a < dims_.size(); ++a) {
    flat += (coords[a] % dims_[a]) * strides_[a];
  }
  return flat;
}

GroupElement DiscreteSpace::identity() const {
  return GroupElement{std::vector<Index>(dims_.size(), 0)};
}

GroupElement DiscreteSpace::element(std::span<const std::int64_t> residues) const {
  if (residues.size() != dims_.size()) {
    throw std::invalid_argument("element: expected " + std::to_string(dims_.size()) +
                                " residues, got " + std::to_string(residues.size()));
  }
  GroupElement g{std::vector<Index>(dims_.size())};
  for (Index a = 0; a < dims_.size(); ++a) {
    const auto m = static_cast<std::int64_t>(dims_[a]);
    g.residues[a] = static_cast<Index>(((residues[a] % m) + m) % m);
  }
  return g;
}

GroupElement DiscreteSpace::element_from_flat(Index flat) const {
  return GroupElement{coordinates(flat % n_)};
}

GroupElement DiscreteSpace::inverse(const GroupElement& omega) const {
  GroupElement g{std::vector<Index>(dims_.size())};
  for (Index a = 0; a < dims_.size(); ++a) {
    g.residues[a] = (dims_[a] - omega.residues[a] % dims_[a]) % dims_[a];
  }
  return g;
}

Index DiscreteSpace::shifted(Index flat, const GroupElement& omega) const {
  Index out = 0;
  for (Index a = 0; a < dims_.size(); ++a) {
    const Index c = (flat / strides_[a]) % dims_[a];
    out += ((c + omega.residues[a]) % dims_[a]) * strides_[a];
  }
  return out;
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(DiscreteSpace space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size()) {
    throw std::invalid_argument("GridFunction: expected " + std::to_string(space_.size()) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("GridFunction: values must be finite");
    }
  }
}

GridFunction::GridFunction(DiscreteSpace space)
    : space_(std::move(space)), values_(space_.size(), 0.0) {}

GridFunction GridFunction::constant(const DiscreteSpace& space, double c) {
  return GridFunction(space, std::vector<double>(space.size(), c));
}

GridFunction GridFunction::abs() const {
  GridFunction out(*this);
  for (double& v : out.values_) v = std::abs(v);
  return out;
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(space_ == other.space_)) throw std::invalid_argument("GridFunction: space mismatch");
  for (Index i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (!(space_ == other.space_)) throw std::invalid_argument("GridFunction: space mismatch");
  for (Index i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// MeasurableSet

MeasurableSet::MeasurableSet(DiscreteSpace space, std::vector<std::uint8_t> mask)
    : space_(std::move(space)), mask_(std::move(mask)) {
  if (mask_.size() != space_.size()) {
    throw std::invalid_argument("MeasurableSet: mask length mismatch");
  }
  for (auto& m : mask_) {
    m = m ? 1 : 0;
    count_ += m;
  }
}

MeasurableSet MeasurableSet::empty(const DiscreteSpace& space) {
  return MeasurableSet(space, std::vector<std::uint8_t>(space.size(), 0));
}

MeasurableSet MeasurableSet::full(const DiscreteSpace& space) {
  return MeasurableSet(space, std::vector<std::uint8_t>(space.size(), 1));
}

MeasurableSet MeasurableSet::interval(const DiscreteSpace& space, Index start, Index length) {
  if (length > space.size()) throw std::invalid_argument("interval: length exceeds space size");
  std::vector<std::uint8_t> mask(space.size(), 0);
  for (Index i = 0; i < length; ++i) mask[(start + i) % space.size()] = 1;
  return MeasurableSet(space, std::move(mask));
}

MeasurableSet MeasurableSet::from_indices(const DiscreteSpace& space,
                                          std::span<const Index> indices) {
  std::vector<std::uint8_t> mask(space.size(), 0);
  for (Index i : indices) {
    if (i >= space.size()) throw std::out_of_range("from_indices: index out of range");
    mask[i] = 1;
  }
  return MeasurableSet(space, std::move(mask));
}

std::vector<Index> MeasurableSet::indices() const {
  std::vector<Index> out;
  out.reserve(count_);
  for (Index i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) out.push_back(i);
  }
  return out;
}

MeasurableSet& MeasurableSet::operator|=(const MeasurableSet& other) {
  if (!(space_ == other.space_)) throw std::invalid_argument("MeasurableSet: space mismatch");
  count_ = 0;
  for (Index i = 0; i < mask_.size(); ++i) {
    mask_[i] = (mask_[i] | other.mask_[i]);
    count_ += mask_[i];
  }
  return *this;
}

// ---------------------------------------------------------------------------
// Rearrangement

Rearrangement::Rearrangement(std::vector<double> sorted_values, std::vector<Index> order)
    : sorted_(std::move(sorted_values)), order_(std::move(order)) {
  if (sorted_.empty() || sorted_.size() != order_.size()) {
    throw std::invalid_argument("Rearrangement: inconsistent sizes");
  }
}

Index Rearrangement::rank_count(double alpha) const {
  const double t = alpha * static_cast<double>(sorted_.size());
  const double nearest = std::round(t);
  double k = (std::abs(t - nearest) <= 1e-9 * std::max(1.0, t)) ? nearest : std::ceil(t);
  k = std::clamp(k, 1.0, static_cast<double>(sorted_.size()));
  return static_cast<Index>(k);
}

// ---------------------------------------------------------------------------
// Free functions

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("conjugate_exponent: p must be >= 1");
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("lp_norm: exponent must satisfy p >= 1");
  }
  double peak = 0.0;
  for (double v : f.values()) peak = std::max(peak, std::abs(v));
  if (std::isinf(p) || peak == 0.0) return peak;

  const double n = static_cast<double>(f.size());
  detail::CompensatedSum acc;
  if (p == 1.0) {
    for (double v : f.values()) acc.add(std::abs(v));
    return acc.value() / n;
  }
  // Scale by the peak so |f|^p neither overflows nor underflows for p near 1 or large.
  if (p == 2.0) {
    for (double v : f.values()) {
      const double s = v / peak;
      acc.add(s * s);
    }
    return peak * std::sqrt(acc.value() / n);
  }
  for (double v : f.values()) acc.add(std::pow(std::abs(v) / peak, p));
  return peak * std::pow(acc.value() / n, 1.0 / p);
}

double integral(const GridFunction& f) {
  detail::CompensatedSum acc;
  for (double v : f.values()) acc.add(v);
  return acc.value() / static_cast<double>(f.size());
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.space() == g.space())) throw std::invalid_argument("inner_product: space mismatch");
  detail::CompensatedSum acc;
  for (Index i = 0; i < f.size(); ++i) acc.add(f[i] * g[i]);
  return acc.value() / static_cast<double>(f.size());
}

GridFunction translate(const GridFunction& f, const GroupElement& omega) {
  const DiscreteSpace& space = f.space();
  if (omega.residues.size() != space.rank()) {
    throw std::invalid_argument("translate: group element rank mismatch");
  }
  std::vector<double> out(f.size());
  for (Index x = 0; x < f.size(); ++x) out[x] = f[space.shifted(x, omega)];
  return GridFunction(space, std::move(out));
}

MeasurableSet translate(const MeasurableSet& s, const GroupElement& omega) {
  const DiscreteSpace& space = s.space();
  if (omega.residues.size() != space.rank()) {
    throw std::invalid_argument("translate: group element rank mismatch");
  }
  std::vector<std::uint8_t> mask(space.size());
  for (Index x = 0; x < space.size(); ++x) mask[x] = s.mask()[space.shifted(x, omega)];
  return MeasurableSet(space, std::move(mask));
}

Rearrangement decreasing_rearrangement(const GridFunction& f) {
  std::vector<Index> order(f.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&f](Index a, Index b) {
    return std::abs(f[a]) > std::abs(f[b]);
  });
  std::vector<double> sorted(f.size());
  for (Index i = 0; i < order.size(); ++i) sorted[i] = std::abs(f[order[i]]);
  return Rearrangement(std::move(sorted), std::move(order));
}

double quantile(const Rearrangement& rearr, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("quantile: alpha must lie in (0, 1]");
  }
  return rearr.sorted_values()[rearr.rank_count(alpha) - 1];
}

double rearranged_level(const Rearrangement& rearr, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("rearranged_level: alpha must be positive");
  if (alpha > 1.0) return 0.0;
  return quantile(rearr, alpha);
}

GridFunction indicator(const MeasurableSet& s) {
  std::vector<double> v(s.space().size());
  for (Index i = 0; i < v.size(); ++i) v[i] = s.contains(i) ? 1.0 : 0.0;
  return GridFunction(s.space(), std::move(v));
}

MeasurableSet support(const GridFunction& f) {
  std::vector<std::uint8_t> mask(f.size());
  for (Index i = 0; i < f.size(); ++i) mask[i] = f[i] != 0.0;
  return MeasurableSet(f.space(), std::move(mask));
}

GridFunction restrict_to(const GridFunction& f, const MeasurableSet& s) {
  if (!(f.space() == s.space())) throw std::invalid_argument("restrict_to: space mismatch");
  GridFunction out(f);
  for (Index i = 0; i < f.size(); ++i) {
    if (!s.contains(i)) out[i] = 0.0;
  }
  return out;
}

}  // namespace extrap
