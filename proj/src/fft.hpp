#ifndef EXTRAP_SRC_FFT_HPP
#define EXTRAP_SRC_FFT_HPP

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "extrap/space.hpp"

namespace extrap::detail {

/// Real-to-complex transform pair for one DiscreteSpace shape, backed by FFTW.
/// Plans are built with FFTW_ESTIMATE so results do not depend on timing.
/// Execution is thread-safe; plan construction is serialised internally.
class RealFft {
 public:
  explicit RealFft(const DiscreteSpace& space);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  /// Length of the half spectrum (last axis truncated to n_d/2 + 1).
  Index spectrum_size() const { return spectrum_size_; }
  Index size() const { return n_; }

  /// Unnormalised forward transform Σ_x f(x) e^{-2πi⟨ξ,x⟩}.
  std::vector<std::complex<double>> forward(std::span<const double> values) const;
  /// Unnormalised inverse; callers divide by n.
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum) const;

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  Index n_ = 0;
  Index spectrum_size_ = 0;
};

/// Full complex DFT Σ_x f(x) e^{-2πi⟨ξ,x⟩} over all n frequencies (row-major).
std::vector<std::complex<double>> full_dft(const DiscreteSpace& space,
                                           std::span<const double> values);

}  // namespace extrap::detail

#endif  // EXTRAP_SRC_FFT_HPP
