#include "extrap/verifier/translates.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "extrap/verifier/square_function.hpp"

namespace extrap::verifier {

namespace {

struct Sparse {
  std::vector<Index> index;
  std::vector<double> value;
};

Sparse sparse_abs(const GridFunction& f) {
  Sparse s;
  for (Index i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) {
      s.index.push_back(i);
      s.value.push_back(std::abs(f[i]));
    }
  }
  return s;
}

// c(ω) = 1/n Σ_x u(x) v(x + ω) = 1/n Σ_{y ∈ supp v} v(y) u(y - ω), for every ω.
std::vector<double> correlation_table(const DiscreteSpace& space, const std::vector<double>& u,
                                      const Sparse& v) {
  const Index n = space.size();
  std::vector<double> table(n);
  for (Index w = 0; w < n; ++w) {
    const GroupElement minus = space.inverse(space.element_from_flat(w));
    detail::CompensatedSum acc;
    for (Index t = 0; t < v.index.size(); ++t) acc.add(v.value[t] * u[space.shifted(v.index[t], minus)]);
    table[w] = acc.value() / static_cast<double>(n);
  }
  return table;
}

double mean(const std::vector<double>& v) {
  detail::CompensatedSum acc;
  for (double x : v) acc.add(x);
  return acc.value() / static_cast<double>(v.size());
}

void validate(const GridFunction& h, const GridFunction& f, const MeasurableSet& e, const MeasurableSet& f_set,
              double p) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("construct_translates: need 1 < p < inf");
  if (!(h.space() == f.space()) || !(f.space() == e.space()) || !(e.space() == f_set.space())) {
    throw std::invalid_argument("construct_translates: inputs live on different spaces");
  }
  if (e.count() == 0 || f_set.count() == 0) throw std::invalid_argument("construct_translates: E and F must be nonempty");
  for (Index i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0 && !e.contains(i)) throw std::invalid_argument("construct_translates: f is not supported on E");
    if (h[i] < 0.0) throw std::invalid_argument("construct_translates: h must be nonnegative");
    if (h[i] != 0.0 && !f_set.contains(i)) throw std::invalid_argument("construct_translates: h is not supported on F");
  }
  if (std::abs(lp_norm(f, p) - 1.0) > 1e-9) throw std::invalid_argument("construct_translates: f must satisfy ‖f‖_p = 1");
}

TranslateFamily attempt(const GridFunction& h, const GridFunction& f, const MeasurableSet& e,
                        const MeasurableSet& f_set, double p, double epsilon, const TranslateConfig& cfg,
                        std::mt19937_64& rng) {
  const DiscreteSpace& space = h.space();
  const Index n = space.size();
  const double h_l1 = lp_norm(h, 1.0);
  const double f_l1 = lp_norm(f, 1.0);
  const double p_dual = conjugate_exponent(p);

  TranslateFamily fam;
  fam.epsilon = epsilon;
  fam.count = translate_count(epsilon, f_set.measure());
  fam.p = p;
  fam.e_measure = e.measure();
  fam.f_measure = f_set.measure();
  fam.A = h_l1 / std::pow(fam.e_measure, 1.0 / p_dual);
  fam.h_bound = 0.5 * fam.A * std::pow(fam.e_measure, 1.0 / p_dual);
  fam.average_h_target_p = fam.A * std::pow(fam.e_measure, 1.0 / p) / 8.0;
  fam.average_h_target_pdual = fam.A * std::pow(fam.e_measure, 1.0 / p_dual) / 8.0;

  const Sparse h_sparse = sparse_abs(h);
  const Sparse f_sparse = sparse_abs(f);
  const GridFunction f_abs = f.abs();

  // Ω_0 is arbitrary; both conditions are vacuous at J = 0.
  fam.elements.push_back(space.identity());
  fam.steps.push_back(TranslateStep{.omega = space.identity()});
  MeasurableSet covered = translate(f_set, space.identity());
  GridFunction stacked = f_abs;

  std::uniform_int_distribution<Index> draw(0, n - 1);
  for (Index J = 1; J <= fam.count; ++J) {
    std::vector<double> covered_values(n), stacked_power(n);
    for (Index x = 0; x < n; ++x) {
      covered_values[x] = covered.contains(x) ? 1.0 : 0.0;
      stacked_power[x] = (stacked[x] > 0.0) ? std::pow(stacked[x], p - 1.0) : 0.0;
    }
    const auto table_h = correlation_table(space, covered_values, h_sparse);
    const auto table_f = correlation_table(space, stacked_power, f_sparse);
    auto accepted = [&](Index w) { return table_h[w] <= fam.h_bound && table_f[w] <= 1.0; };

    TranslateStep step;
    step.average_h = mean(table_h);
    step.average_h_closed_form = covered.measure() * h_l1;
    step.average_f = mean(table_f);
    step.average_f_closed_form = mean(stacked_power) * f_l1;
    Index good = 0;
    for (Index w = 0; w < n; ++w) good += accepted(w) ? 1 : 0;
    step.exact_acceptance = static_cast<double>(good) / static_cast<double>(n);

    Index chosen = n;
    for (Index a = 1; a <= cfg.max_attempts; ++a) {
      const Index w = draw(rng);
      if (accepted(w)) {
        chosen = w;
        step.attempts = a;
        break;
      }
    }
    if (chosen == n) {
      std::ostringstream msg;
      msg << "construct_translates: step J=" << J << " of N=" << fam.count << " exceeded " << cfg.max_attempts
          << " attempts at epsilon=" << epsilon << " (exact acceptance " << step.exact_acceptance << ")";
      throw TranslationStalled(msg.str());
    }
    for (Index t = 0; t < cfg.acceptance_trials; ++t) {
      ++step.trial_draws;
      step.trial_accepted += accepted(draw(rng)) ? 1 : 0;
    }

    // Re-evaluate both conditions directly for the chosen element.
    step.omega = space.element_from_flat(chosen);
    const GridFunction h_moved = translate(h, step.omega);
    const GridFunction f_moved = translate(f_abs, step.omega);
    step.disjoint_h = inner_product(indicator(covered), h_moved);
    step.disjoint_f = inner_product(GridFunction(space, stacked_power), f_moved);

    covered |= translate(f_set, step.omega);
    stacked += f_moved;
    fam.elements.push_back(step.omega);
    fam.steps.push_back(std::move(step));
  }
  return fam;
}

}  // namespace

Index translate_count(double epsilon, double f_measure) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("translate_count: epsilon must lie in (0, 1]");
  if (!(f_measure > 0.0)) throw std::invalid_argument("translate_count: |F| must be positive");
  return static_cast<Index>(std::llround(epsilon / f_measure));
}

bool TranslateFamily::conditions_hold() const {
  for (Index J = 1; J < steps.size(); ++J) {
    if (steps[J].disjoint_h > h_bound || steps[J].disjoint_f > 1.0) return false;
  }
  return true;
}

Index TranslateFamily::total_trial_draws() const {
  Index t = 0;
  for (const auto& s : steps) t += s.trial_draws;
  return t;
}

Index TranslateFamily::total_trial_accepted() const {
  Index t = 0;
  for (const auto& s : steps) t += s.trial_accepted;
  return t;
}

TranslateFamily construct_translates(const GridFunction& h, const GridFunction& f, const MeasurableSet& e,
                                     const MeasurableSet& f_set, double p, const TranslateConfig& cfg) {
  validate(h, f, e, f_set, p);
  std::mt19937_64 rng(cfg.seed);
  double epsilon = cfg.epsilon;
  for (int shrink = 0;; ++shrink) {
    try {
      TranslateFamily fam = attempt(h, f, e, f_set, p, epsilon, cfg, rng);
      fam.shrinks = shrink;
      return fam;
    } catch (const TranslationStalled&) {
      if (!cfg.auto_shrink || shrink >= cfg.max_shrinks) throw;
      epsilon *= 0.5;
    }
  }
}

std::vector<GridFunction> translated_family(const GridFunction& h, const TranslateFamily& family) {
  std::vector<GridFunction> out;
  out.reserve(family.elements.size());
  for (const auto& omega : family.elements) out.push_back(translate(h, omega));
  return out;
}

TelescopingReport telescoping_check(const GridFunction& h, const MeasurableSet& f_set, const TranslateFamily& family) {
  const auto moved = translated_family(h, family);
  TelescopingReport rep;
  MeasurableSet covered = MeasurableSet::empty(h.space());
  const double tol = 1e-12;
  for (Index J = 0; J < moved.size(); ++J) {
    const double s_l1 = lp_norm(square_function(std::span(moved.data(), J + 1)), 1.0);
    if (J > 0) {
      const double fresh = integral(moved[J]) - inner_product(indicator(covered), moved[J]);
      rep.fresh_mass.push_back(fresh);
      if (s_l1 < rep.square_l1.back() + fresh - tol * s_l1) rep.steps_hold = false;
    } else {
      rep.fresh_mass.push_back(0.0);
    }
    rep.square_l1.push_back(s_l1);
    covered |= translate(f_set, family.elements[J]);
  }
  rep.telescoped_bound = 0.5 * static_cast<double>(family.count) * family.A * std::pow(family.e_measure, 1.0 / conjugate_exponent(family.p));
  rep.bound_holds = rep.square_l1.back() >= rep.telescoped_bound * (1.0 - tol);
  return rep;
}

}  // namespace extrap::verifier
