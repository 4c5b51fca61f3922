#ifndef EXTRAP_SPACE_HPP
#define EXTRAP_SPACE_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace extrap {

using Index = std::size_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A residue tuple (ω_1, …, ω_d) acting on Z_{n_1} × … × Z_{n_d} by addition.
struct GroupElement {
  std::vector<Index> residues;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Finite abelian group Z_{n_1} × … × Z_{n_d} carrying the normalized counting
/// measure. It plays both roles: the space X and the translation group G.
/// Points are stored row-major (last axis fastest).
class DiscreteSpace {
 public:
  explicit DiscreteSpace(std::vector<Index> dims);

  static DiscreteSpace cyclic(Index n) { return DiscreteSpace({n}); }

  const std::vector<Index>& dims() const { return dims_; }
  Index rank() const { return dims_.size(); }
  Index size() const { return n_; }
  /// Measure of a single point, 1/n.
  double weight() const { return 1.0 / static_cast<double>(n_); }

  std::vector<Index> coordinates(Index flat) const;
  Index flat_index(std::span<const Index> coords) const;

  GroupElement identity() const;
  /// Reduces arbitrary signed residues modulo dims.
  GroupElement element(std::span<const std::int64_t> residues) const;
  GroupElement element_from_flat(Index flat) const;
  GroupElement inverse(const GroupElement& omega) const;
  /// Flat index of x + ω.
  Index shifted(Index flat, const GroupElement& omega) const;

  friend bool operator==(const DiscreteSpace& a, const DiscreteSpace& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<Index> dims_;
  std::vector<Index> strides_;
  Index n_ = 1;
};

/// A real-valued function on a DiscreteSpace.
class GridFunction {
 public:
  GridFunction(DiscreteSpace space, std::vector<double> values);
  /// The zero function.
  explicit GridFunction(DiscreteSpace space);

  static GridFunction constant(const DiscreteSpace& space, double c);

  const DiscreteSpace& space() const { return space_; }
  Index size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](Index i) const { return values_[i]; }
  double& operator[](Index i) { return values_[i]; }

  GridFunction abs() const;
  bool is_zero() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }
  friend GridFunction operator*(GridFunction a, double s) { return a *= s; }

 private:
  DiscreteSpace space_;
  std::vector<double> values_;
};

/// A subset of the space, stored as a 0/1 mask.
class MeasurableSet {
 public:
  MeasurableSet(DiscreteSpace space, std::vector<std::uint8_t> mask);
  static MeasurableSet empty(const DiscreteSpace& space);
  static MeasurableSet full(const DiscreteSpace& space);
  /// Contiguous block of flat indices [start, start + length), wrapping around.
  static MeasurableSet interval(const DiscreteSpace& space, Index start, Index length);
  static MeasurableSet from_indices(const DiscreteSpace& space, std::span<const Index> indices);

  const DiscreteSpace& space() const { return space_; }
  bool contains(Index i) const { return mask_[i] != 0; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  Index count() const { return count_; }
  double measure() const {
    return static_cast<double>(count_) / static_cast<double>(space_.size());
  }
  std::vector<Index> indices() const;

  MeasurableSet& operator|=(const MeasurableSet& other);
  friend bool operator==(const MeasurableSet& a, const MeasurableSet& b) {
    return a.space_ == b.space_ && a.mask_ == b.mask_;
  }

 private:
  DiscreteSpace space_;
  std::vector<std::uint8_t> mask_;
  Index count_ = 0;
};

/// Non-increasing, left-continuous rearrangement f* of |f| on (0, 1].
class Rearrangement {
 public:
  Rearrangement(std::vector<double> sorted_values, std::vector<Index> order);

  /// |f| values in non-increasing order; ties keep ascending index order.
  std::span<const double> sorted_values() const { return sorted_; }
  /// order()[i] is the flat index holding the (i+1)-th largest value.
  std::span<const Index> order() const { return order_; }
  Index size() const { return sorted_.size(); }

  /// Number of ranks ⌈α·n⌉ covered by mass α, snapped for α on the 1/n grid.
  Index rank_count(double alpha) const;

 private:
  std::vector<double> sorted_;
  std::vector<Index> order_;
};

/// p' = p/(p-1), with 1' = ∞ and ∞' = 1.
double conjugate_exponent(double p);

/// (1/n Σ|f|^p)^{1/p}; max|f| for p = ∞.
double lp_norm(const GridFunction& f, double p);
/// 1/n Σ f.
double integral(const GridFunction& f);
/// 1/n Σ f·g.
double inner_product(const GridFunction& f, const GridFunction& g);

/// (f∘ω)(x) = f(x + ω).
GridFunction translate(const GridFunction& f, const GroupElement& omega);
/// The set whose indicator is χ_S∘ω, i.e. S - ω.
MeasurableSet translate(const MeasurableSet& s, const GroupElement& omega);

Rearrangement decreasing_rearrangement(const GridFunction& f);
/// f*(α) for α ∈ (0, 1].
double quantile(const Rearrangement& rearr, double alpha);
/// f*(α) extended by zero for α > 1 (the function lives on a space of mass 1).
double rearranged_level(const Rearrangement& rearr, double alpha);

GridFunction indicator(const MeasurableSet& s);
MeasurableSet support(const GridFunction& f);
/// f·χ_S.
GridFunction restrict_to(const GridFunction& f, const MeasurableSet& s);

namespace detail {

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

}  // namespace detail

}  // namespace extrap

#endif  // EXTRAP_SPACE_HPP
