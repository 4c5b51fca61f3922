#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace extrap::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> allocate(Index count) {
  auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<Index>(count, 1)));
  if (raw == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(raw);
}

std::vector<int> fftw_dims(const DiscreteSpace& space) {
  std::vector<int> dims;
  for (Index d : space.dims()) dims.push_back(static_cast<int>(d));
  return dims;
}

}  // namespace

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

RealFft::RealFft(const DiscreteSpace& space) : plans_(std::make_unique<Plans>()) {
  n_ = space.size();
  spectrum_size_ = n_ / space.dims().back() * (space.dims().back() / 2 + 1);
  const auto dims = fftw_dims(space);
  auto real = allocate<double>(n_);
  auto cplx = allocate<fftw_complex>(spectrum_size_);
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c(static_cast<int>(dims.size()), dims.data(), real.get(),
                                      cplx.get(), FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_c2r(static_cast<int>(dims.size()), dims.data(), cplx.get(),
                                       real.get(), FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) {
    throw std::runtime_error("RealFft: FFTW planning failed");
  }
}

RealFft::~RealFft() = default;

std::vector<std::complex<double>> RealFft::forward(std::span<const double> values) const {
  auto real = allocate<double>(n_);
  auto cplx = allocate<fftw_complex>(spectrum_size_);
  std::copy(values.begin(), values.end(), real.get());
  fftw_execute_dft_r2c(plans_->forward, real.get(), cplx.get());
  std::vector<std::complex<double>> out(spectrum_size_);
  for (Index i = 0; i < spectrum_size_; ++i) out[i] = {cplx[i][0], cplx[i][1]};
  return out;
}

std::vector<double> RealFft::inverse(std::span<const std::complex<double>> spectrum) const {
  auto real = allocate<double>(n_);
  auto cplx = allocate<fftw_complex>(spectrum_size_);
  for (Index i = 0; i < spectrum_size_; ++i) {
    cplx[i][0] = spectrum[i].real();
    cplx[i][1] = spectrum[i].imag();
  }
  // c2r overwrites its input; the buffer is ours.
  fftw_execute_dft_c2r(plans_->backward, cplx.get(), real.get());
  return std::vector<double>(real.get(), real.get() + n_);
}

std::vector<std::complex<double>> full_dft(const DiscreteSpace& space,
                                           std::span<const double> values) {
  const Index n = space.size();
  const auto dims = fftw_dims(space);
  auto in = allocate<fftw_complex>(n);
  auto out = allocate<fftw_complex>(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in.get(), out.get(),
                         FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (Index i = 0; i < n; ++i) {
    in[i][0] = values[i];
    in[i][1] = 0.0;
  }
  fftw_execute(plan);
  std::vector<std::complex<double>> result(n);
  for (Index i = 0; i < n; ++i) result[i] = {out[i][0], out[i][1]};
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return result;
}

}  // namespace extrap::detail
