#include "extrap/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace extrap {

namespace {

void require_same_space(const DiscreteSpace& a, const DiscreteSpace& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": function lives on a different space");
}

GridFunction point_mass(const DiscreteSpace& space) {
  GridFunction f(space);
  f[0] = static_cast<double>(space.size());
  return f;
}

// cos(2π Σ_a ξ_a x_a / n_a): a real eigen-direction of a real convolution at frequency ξ.
GridFunction cosine_mode(const DiscreteSpace& space, Index frequency_flat) {
  const auto xi = space.coordinates(frequency_flat);
  GridFunction f(space);
  for (Index x = 0; x < space.size(); ++x) {
    const auto c = space.coordinates(x);
    double phase = 0.0;
    for (Index a = 0; a < c.size(); ++a) {
      // Reduce the integer product first so the phase stays accurate.
      const Index k = (xi[a] * c[a]) % space.dims()[a];
      phase += static_cast<double>(k) / static_cast<double>(space.dims()[a]);
    }
    f[x] = std::cos(2.0 * std::numbers::pi * phase);
  }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvolutionOperator

ConvolutionOperator::ConvolutionOperator(GridFunction kernel)
    : kernel_(std::move(kernel)), fft_(std::make_shared<detail::RealFft>(kernel_.space())) {
  auto spectrum = fft_->forward(kernel_.values());
  const double n = static_cast<double>(kernel_.size());
  for (auto& c : spectrum) c /= n;
  half_multiplier_ = std::make_shared<const std::vector<std::complex<double>>>(std::move(spectrum));
}

GridFunction ConvolutionOperator::apply(const GridFunction& f) const {
  require_same_space(space(), f.space(), "ConvolutionOperator::apply");
  auto spectrum = fft_->forward(f.values());
  const auto& m = *half_multiplier_;
  for (Index i = 0; i < spectrum.size(); ++i) spectrum[i] *= m[i];
  auto values = fft_->inverse(spectrum);
  const double n = static_cast<double>(f.size());
  for (double& v : values) v /= n;
  return GridFunction(space(), std::move(values));
}

GridFunction ConvolutionOperator::apply_direct(const GridFunction& f) const {
  require_same_space(space(), f.space(), "ConvolutionOperator::apply_direct");
  const DiscreteSpace& s = space();
  const Index n = s.size();
  // minus_y[y][x] would be n² memory; recompute the shift per (x, y) instead.
  std::vector<GroupElement> negated(n);
  for (Index y = 0; y < n; ++y) negated[y] = s.inverse(s.element_from_flat(y));
  std::vector<double> out(n);
  for (Index x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Index y = 0; y < n; ++y) {
      if (kernel_[y] != 0.0) acc += kernel_[y] * f[s.shifted(x, negated[y])];
    }
    out[x] = acc / static_cast<double>(n);
  }
  return GridFunction(s, std::move(out));
}

ConvolutionOperator ConvolutionOperator::adjoint() const {
  const DiscreteSpace& s = space();
  GridFunction reflected(s);
  for (Index y = 0; y < s.size(); ++y) {
    reflected[s.shifted(0, s.inverse(s.element_from_flat(y)))] = kernel_[y];
  }
  return ConvolutionOperator(std::move(reflected));
}

std::vector<std::complex<double>> ConvolutionOperator::multiplier() const {
  auto m = detail::full_dft(space(), kernel_.values());
  const double n = static_cast<double>(kernel_.size());
  for (auto& c : m) c /= n;
  return m;
}

double ConvolutionOperator::max_abs_multiplier() const {
  double best = 0.0;
  for (const auto& c : *half_multiplier_) best = std::max(best, std::abs(c));
  return best;
}

double ConvolutionOperator::kernel_l1() const { return lp_norm(kernel_, 1.0); }

// ---------------------------------------------------------------------------
// RankOneOperator

RankOneOperator::RankOneOperator(double scale, MeasurableSet source, MeasurableSet target)
    : scale_(scale), source_(std::move(source)), target_(std::move(target)) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw std::invalid_argument("RankOneOperator: scale must be positive and finite");
  }
  require_same_space(source_.space(), target_.space(), "RankOneOperator");
  if (source_.count() == 0 || target_.count() == 0) {
    throw std::invalid_argument("RankOneOperator: E and F must be nonempty");
  }
}

GridFunction RankOneOperator::apply(const GridFunction& f) const {
  require_same_space(space(), f.space(), "RankOneOperator::apply");
  detail::CompensatedSum acc;
  for (Index i = 0; i < f.size(); ++i) {
    if (source_.contains(i)) acc.add(f[i]);
  }
  const double coefficient = scale_ * acc.value() / static_cast<double>(f.size());
  GridFunction out(space());
  for (Index i = 0; i < out.size(); ++i) {
    if (target_.contains(i)) out[i] = coefficient;
  }
  return out;
}

double RankOneOperator::closed_form_norm(double p) const {
  if (!(p >= 1.0)) throw std::invalid_argument("closed_form_norm: p must be >= 1");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return scale_ * std::pow(source_.measure(), 1.0 - inv_p) * std::pow(target_.measure(), inv_p);
}

// ---------------------------------------------------------------------------
// Operator variant

GridFunction apply(const Operator& op, const GridFunction& f) {
  return std::visit([&f](const auto& t) { return t.apply(f); }, op);
}

Operator adjoint(const Operator& op) {
  return std::visit([](const auto& t) -> Operator { return t.adjoint(); }, op);
}

const DiscreteSpace& space_of(const Operator& op) {
  return std::visit([](const auto& t) -> const DiscreteSpace& { return t.space(); }, op);
}

double norm_ratio(const Operator& op, const GridFunction& f, double p) {
  const double denom = lp_norm(f, p);
  if (denom == 0.0) throw std::invalid_argument("norm_ratio: zero test function");
  return lp_norm(extrap::apply(op, f), p) / denom;
}

double interpolate_bound(double p0, double b0, double p1, double b1, double p) {
  const double i0 = 1.0 / p0;
  const double i1 = std::isinf(p1) ? 0.0 : 1.0 / p1;
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  if (i0 == i1) throw std::invalid_argument("interpolate_bound: endpoints coincide");
  const double theta = (i0 - ip) / (i0 - i1);
  if (theta < -1e-15 || theta > 1.0 + 1e-15) {
    throw std::invalid_argument("interpolate_bound: p outside [p0, p1]");
  }
  if (b0 == 0.0 || b1 == 0.0) return 0.0;
  return std::pow(b0, 1.0 - theta) * std::pow(b1, theta);
}

// ---------------------------------------------------------------------------
// opnorm_lp

namespace {

NormReport certified(const Operator& op, double p, GridFunction witness, double upper,
                     std::string method) {
  NormReport r;
  r.p = p;
  r.lower = norm_ratio(op, witness, p);
  r.upper = upper * (1.0 + kUpperBoundSlack);
  r.method = std::move(method);
  r.witness = std::move(witness);
  return r;
}

NormReport convolution_norm(const ConvolutionOperator& conv, const Operator& op, double p,
                            const PowerIterationOptions& options) {
  const DiscreteSpace& s = conv.space();
  const double l1 = conv.kernel_l1();
  const double m2 = conv.max_abs_multiplier();
  if (l1 == 0.0) {
    return certified(op, p, GridFunction::constant(s, 1.0), 0.0, "zero-kernel");
  }
  if (p == 1.0) return certified(op, p, point_mass(s), l1, "closed-form:kernel-l1");
  if (std::isinf(p)) {
    // f(x) = sign K(-x) makes (Tf)(0) = 1/n Σ|K|.
    GridFunction f(s);
    const auto& k = conv.kernel();
    for (Index y = 0; y < s.size(); ++y) {
      const Index minus_y = s.shifted(0, s.inverse(s.element_from_flat(y)));
      f[minus_y] = (k[y] > 0.0) ? 1.0 : (k[y] < 0.0 ? -1.0 : 0.0);
    }
    return certified(op, p, std::move(f), l1, "closed-form:kernel-l1");
  }
  if (p == 2.0) {
    const auto m = conv.multiplier();
    Index arg = 0;
    for (Index i = 1; i < m.size(); ++i) {
      if (std::abs(m[i]) > std::abs(m[arg])) arg = i;
    }
    return certified(op, p, cosine_mode(s, arg), m2, "closed-form:max-multiplier");
  }
  NormReport r = power_iteration(op, p, options);
  const double envelope =
      (p < 2.0) ? interpolate_bound(1.0, l1, 2.0, m2, p) : interpolate_bound(2.0, m2, kInfinity, l1, p);
  r.upper = std::min(envelope, l1) * (1.0 + kUpperBoundSlack);
  r.method = "power-iteration+interpolation-envelope";
  return r;
}

}  // namespace

NormReport opnorm_lp(const Operator& op, double p, const PowerIterationOptions& options) {
  if (!(p >= 1.0)) throw std::invalid_argument("opnorm_lp: p must be >= 1");
  if (const auto* conv = std::get_if<ConvolutionOperator>(&op)) {
    return convolution_norm(*conv, op, p, options);
  }
  const auto& rank_one = std::get<RankOneOperator>(op);
  return certified(op, p, indicator(rank_one.source()), rank_one.closed_form_norm(p),
                   "closed-form:rank-one");
}

}  // namespace extrap
