#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

#include "extrap/operators.hpp"

namespace extrap {

namespace {

// sign(v)·(|v|/max|v|)^{exponent}; the overall scale is irrelevant to the iteration.
GridFunction dual_direction(const GridFunction& v, double exponent) {
  double peak = 0.0;
  for (double x : v.values()) peak = std::max(peak, std::abs(x));
  GridFunction out(v.space());
  if (peak == 0.0) return out;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) / peak;
    const double mag = (exponent == 1.0) ? a : std::pow(a, exponent);
    out[i] = std::copysign(mag, v[i]);
    if (v[i] == 0.0) out[i] = 0.0;
  }
  return out;
}

struct RunResult {
  double value = 0.0;
  std::optional<GridFunction> witness;
  int iterations = 0;
  bool converged = false;
};

RunResult run_from(const Operator& op, const Operator& op_adjoint, double p, GridFunction start,
                   const PowerIterationOptions& options) {
  RunResult result;
  const double start_norm = lp_norm(start, p);
  if (start_norm == 0.0) return result;
  GridFunction f = std::move(start);
  f *= 1.0 / start_norm;

  const double p_dual = conjugate_exponent(p);
  double previous = 0.0;
  int stall = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const GridFunction g = extrap::apply(op, f);
    const double value = lp_norm(g, p) / lp_norm(f, p);
    result.iterations = it + 1;
    if (value > result.value || !result.witness) {
      result.value = value;
      result.witness = f;
    }
    if (value == 0.0) break;
    if (it > 0) {
      stall = (value - previous <= options.relative_tolerance * value) ? stall + 1 : 0;
      if (stall >= options.patience) {
        result.converged = true;
        break;
      }
    }
    previous = value;

    const GridFunction y = extrap::apply(op_adjoint, dual_direction(g, p - 1.0));
    GridFunction next = dual_direction(y, p_dual - 1.0);
    const double norm = lp_norm(next, p);
    if (norm == 0.0) break;
    next *= 1.0 / norm;
    f = std::move(next);
  }
  return result;
}

std::vector<GridFunction> starting_points(const DiscreteSpace& space, const PowerIterationOptions& options) {
  std::vector<GridFunction> starts;
  starts.push_back(GridFunction::constant(space, 1.0));
  GridFunction mass(space);
  mass[0] = 1.0;
  starts.push_back(std::move(mass));
  for (int k = 0; k < options.random_restarts; ++k) {
    std::mt19937_64 rng(options.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k + 1));
    std::normal_distribution<double> normal;
    GridFunction f(space);
    for (Index i = 0; i < f.size(); ++i) f[i] = normal(rng);
    starts.push_back(std::move(f));
  }
  return starts;
}

}  // namespace

NormReport power_iteration(const Operator& op, double p, const PowerIterationOptions& options) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw std::invalid_argument("power_iteration: requires 1 < p < inf");
  }
  const Operator op_adjoint = adjoint(op);
  auto starts = starting_points(space_of(op), options);

  std::vector<RunResult> runs(starts.size());
  if (options.parallel && starts.size() > 1) {
    std::vector<std::future<RunResult>> pending;
    for (auto& s : starts) {
      pending.push_back(std::async(std::launch::async, [&, start = std::move(s)]() mutable {
        return run_from(op, op_adjoint, p, std::move(start), options);
      }));
    }
    for (Index i = 0; i < pending.size(); ++i) runs[i] = pending[i].get();
  } else {
    for (Index i = 0; i < starts.size(); ++i) {
      runs[i] = run_from(op, op_adjoint, p, std::move(starts[i]), options);
    }
  }

  // Reduce by max; ties resolve to the earliest start.
  Index best = 0;
  int total_iterations = 0;
  for (Index i = 0; i < runs.size(); ++i) {
    total_iterations += runs[i].iterations;
    if (runs[i].value > runs[best].value) best = i;
  }
  NormReport report;
  report.p = p;
  report.method = "power-iteration";
  report.iterations = total_iterations;
  report.converged = runs[best].converged;
  if (runs[best].witness) {
    report.witness = std::move(runs[best].witness);
    report.lower = norm_ratio(op, *report.witness, p);
  }
  return report;
}

}  // namespace extrap
