#include "extrap/verifier/growth.hpp"

#include <cmath>
#include <stdexcept>

namespace extrap::verifier {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("fit_power_law: need at least two points");
  const Index m = x.size();
  std::vector<double> lx(m), ly(m);
  for (Index i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_power_law: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (Index i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (Index i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: x values are all equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double e = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(m));
  return fit;
}

GrowthFit fit_growth_samples(std::span<const GrowthSample> samples, double r_hint) {
  std::vector<double> x, y;
  for (const auto& s : samples) {
    if (!(s.p > 1.0)) throw std::invalid_argument("fit_growth_samples: every p must exceed 1");
    x.push_back(1.0 / (s.p - 1.0));
    y.push_back(s.norm);
  }
  if (x.size() < 4) throw std::invalid_argument("fit_growth_samples: need at least four samples");
  const PowerLawFit fit = fit_power_law(x, y);
  GrowthFit out;
  out.samples.assign(samples.begin(), samples.end());
  out.exponent = fit.exponent;
  out.intercept = fit.intercept;
  out.residual = fit.residual;
  out.hint_deviation = std::abs(fit.exponent - r_hint);
  return out;
}

GrowthFit fit_growth_exponent(const Operator& op, std::span<const double> p_grid, OrliczParams r_hint,
                              const PowerIterationOptions& options) {
  std::vector<GrowthSample> samples;
  std::vector<NormReport> reports;
  for (double p : p_grid) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("fit_growth_exponent: need 1 < p < inf");
    NormReport rep = opnorm_lp(op, p, options);
    samples.push_back({p, rep.lower});
    reports.push_back(std::move(rep));
  }
  GrowthFit fit = fit_growth_samples(samples, r_hint.r());
  for (const auto& rep : reports) fit.all_converged = fit.all_converged && rep.converged;
  fit.reports = std::move(reports);
  return fit;
}

}  // namespace extrap::verifier
