#ifndef EXTRAP_KERNELS_HPP
#define EXTRAP_KERNELS_HPP

#include <cstdint>
#include <string_view>

#include "extrap/space.hpp"

namespace extrap::kernels {

/// n·δ_0: the identity convolution.
GridFunction dirac(const DiscreteSpace& space);
/// K ≡ 1: projection onto constants.
GridFunction constant(const DiscreteSpace& space);
/// Multiplier 1 on the box |ξ_a| ≤ m (centred frequencies) and 0 elsewhere.
GridFunction dirichlet(const DiscreteSpace& space, Index m);
/// Multiplier Π_a (1 - |ξ_a|/(m+1))_+; the kernel is nonnegative.
GridFunction fejer(const DiscreteSpace& space, Index m);
/// Discrete conjugate-function kernel K(j) = cot(πj/n), K(0) = K(n/2) = 0, on Z_n.
GridFunction hilbert(const DiscreteSpace& space);
/// i.i.d. standard normal values.
GridFunction random(const DiscreteSpace& space, std::uint64_t seed);

/// Parses "dirac", "constant", "dirichlet:m", "fejer:m", "hilbert", "random:seed".
GridFunction by_name(const DiscreteSpace& space, std::string_view name);

}  // namespace extrap::kernels

#endif  // EXTRAP_KERNELS_HPP
