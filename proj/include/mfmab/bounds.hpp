#pragma once
// Numeric evaluation of the analytical cost-complexity and regret bounds for
// a given instance. Unspecified leading constants are reported as 1 and all
// O(.)-style expressions are evaluated bare, so every value here is a
// shape-only curve for overlaying against empirical results, not a certified
// bound.
//
// Identification lower bound (Bernoulli instances, zero top error bound):
//   kl form:       [ min_{m in M_1} lambda^(m)/kl(mu_1^(m), mu_2^(M)+zeta^(m))
//                  + sum_{k!=1} min_{m in M_k} lambda^(m)/kl(mu_k^(m), mu_1^(M)-zeta^(m)) ]
//                  * log(1/(2.4 delta)),
//     where M_k keeps the fidelities whose shifted target lies strictly
//     inside (0,1) on the informative side of mu_k^(m);
//   simplified:    sum_k min_{m: gap>0} lambda^(m)/gap^2 * log(1/delta).
//
// Identification upper bounds (from the hardness coefficients):
//   A: H~ log(L(H~+G~)/(lambda^(1) delta)) + G~ loglog(same)
//   B: H~ * S * log(S H~ L / (lambda^(1) delta)),  S = sum_m lambda^(m)/lambda^(1)
//   C: H+ log(L(H+ + Q)/(lambda^(1) delta)) + Q log(same)
//
// Regret bounds (classic top-fidelity gaps g_k = mu_1^(M) - mu_k^(M)):
//   dependent lower coeff:  sum_{k!=1} min_{m: gap_k^(m)>0}
//                             (lambda^(m)/lambda^(1) mu_1 - mu_k) / (gap_k^(m))^2
//   dependent upper coeff:  sum_{k!=1} (lambda^(M)/lambda^(1) mu_1 - mu_k) * 16 / g_k^2
//   finite-budget dependent bound: the three-term phase-accounting expression
//   independent upper bound:
//     2 (16 K mu_1 lambda^(M)/lambda^(1) ln(budget/(16 lambda^(M))))^{1/3}
//       (budget/lambda^(1))^{2/3}

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mfmab/gaps.hpp"
#include "mfmab/instance.hpp"

namespace mfmab {

// KL divergence between Bernoulli(p) and Bernoulli(q), with 0 log 0 = 0.
// Degenerate q in {0,1} gives 0 on a match and +inf otherwise.
inline double bernoulli_kl(double p, double q) {
  if (q <= 0.0 || q >= 1.0)
    return p == q ? 0.0 : std::numeric_limits<double>::infinity();
  double value = 0.0;
  if (p > 0.0) value += p * std::log(p / q);
  if (p < 1.0) value += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return value;
}

struct BaiLowerBound {
  double kl_value = 0.0;
  double simplified = 0.0;
};

inline BaiLowerBound bai_lower_bound(const InstanceSpec& spec, double delta) {
  if (spec.distribution != Distribution::bernoulli)
    throw std::domain_error("kl lower bound is evaluated for bernoulli instances");
  if (spec.error_bounds.back() != 0.0)
    throw std::domain_error("kl lower bound requires a zero top-fidelity error bound");
  if (!(delta > 0.0 && delta < 1.0 / 2.4))
    throw std::invalid_argument("kl lower bound needs delta in (0, 1/2.4)");

  const int K = spec.num_arms;
  const int M = spec.num_fidelities;
  const double mu1 = spec.true_mean(0);
  const double mu2 = spec.true_mean(1);

  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int m = 0; m < M; ++m) {
      const double zeta = spec.error_bounds[m];
      const double p = spec.mean(k, m);
      // Shift the arm's mean to just past the decision threshold; fidelities
      // whose target leaves (0,1) or sits on the wrong side of p are skipped.
      const double q = k == 0 ? mu2 + zeta : mu1 - zeta;
      const bool informative = k == 0 ? q < p : q > p;
      if (!(q > 0.0 && q < 1.0) || !informative) continue;
      best = std::min(best, spec.costs[m] / bernoulli_kl(p, q));
      found = true;
    }
    if (found) sum += best;
  }

  BaiLowerBound lb;
  lb.kl_value = sum * std::log(1.0 / (2.4 * delta));

  const GapTable g = reward_gaps(spec);
  double hsum = 0.0;
  for (int k = 0; k < K; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m < M; ++m)
      if (g.delta[k][m] > 0.0)
        best = std::min(best, spec.costs[m] / (g.delta[k][m] * g.delta[k][m]));
    if (std::isfinite(best)) hsum += best;
  }
  lb.simplified = hsum * std::log(1.0 / delta);
  return lb;
}

struct BaiUpperBounds {
  double a_leading = 0.0;
  double a_loglog = 0.0;
  bool a_loglog_clamped = false;  // inner log <= 1, term reported as 0
  double b = 0.0;
  std::optional<double> c_h_term;  // absent when some arm has no m_dagger
  std::optional<double> c_q_term;
};

inline BaiUpperBounds bai_upper_bounds(const InstanceSpec& spec,
                                       const PriorMeans& prior, double delta,
                                       double L) {
  const HardnessReport h = hardness(spec, prior);
  const double lambda1 = spec.base_cost();

  BaiUpperBounds ub;
  const double arg_a = L * (h.H_tilde + h.G_tilde) / (lambda1 * delta);
  ub.a_leading = h.H_tilde * std::log(arg_a);
  const double inner = std::log(arg_a);
  if (inner <= 1.0) {
    ub.a_loglog = 0.0;
    ub.a_loglog_clamped = true;
  } else {
    ub.a_loglog = h.G_tilde * std::log(inner);
  }

  double cost_ratio_sum = 0.0;
  for (double c : spec.costs) cost_ratio_sum += c / lambda1;
  ub.b = h.H_tilde * cost_ratio_sum *
         std::log(cost_ratio_sum * h.H_tilde * L / (lambda1 * delta));

  if (h.H_dagger && h.Q) {
    const double arg_c = L * (*h.H_dagger + *h.Q) / (lambda1 * delta);
    ub.c_h_term = *h.H_dagger * std::log(arg_c);
    ub.c_q_term = *h.Q * std::log(arg_c);
  }
  return ub;
}

struct Arm2Assumption {
  bool holds = true;
  std::vector<int> violating_arms;  // canonical indices
};

// The guarantee behind the identification upper bounds additionally assumes
// the second-best true mean dominates every suboptimal arm's certified upper
// range at its optimal fidelity: mu_2^(M) >= mu_k^(m*_k) + zeta^(m*_k).
inline Arm2Assumption check_assumption_arm2(const InstanceSpec& spec) {
  const GapTable g = reward_gaps(spec);
  const std::vector<int> mstar = optimal_fidelity(g, spec.costs);
  Arm2Assumption a;
  const double mu2 = spec.true_mean(1);
  for (int k = 1; k < spec.num_arms; ++k) {
    const int m = mstar[k];
    if (!(mu2 >= spec.mean(k, m) + spec.error_bounds[m])) {
      a.holds = false;
      a.violating_arms.push_back(k);
    }
  }
  return a;
}

struct RegretBoundReport {
  double dep_lb_coeff = 0.0;
  double dep_ub_coeff = 0.0;
  double finite_dep_ub = 0.0;
  double indep_ub = 0.0;
  bool log_clamped = false;  // some log argument was <= 1 and clamped to 0
};

inline RegretBoundReport regret_bounds(const InstanceSpec& spec, double budget,
                                       double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int K = spec.num_arms;
  const double lambda1 = spec.base_cost();
  const double lambdaM = spec.top_cost();
  const double mu1 = spec.true_mean(0);

  RegretBoundReport r;
  auto ln_clamped = [&r](double arg) {
    if (arg <= 1.0) {
      r.log_clamped = true;
      return 0.0;
    }
    return std::log(arg);
  };

  const GapTable g = reward_gaps(spec);
  for (int k = 1; k < K; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m < spec.num_fidelities; ++m) {
      if (!(g.delta[k][m] > 0.0)) continue;
      const double coeff = spec.costs[m] / lambda1 * mu1 - spec.true_mean(k);
      best = std::min(best, coeff / (g.delta[k][m] * g.delta[k][m]));
    }
    if (std::isfinite(best)) r.dep_lb_coeff += best;
  }

  for (int k = 1; k < K; ++k) {
    const double gap = mu1 - spec.true_mean(k);
    r.dep_ub_coeff += (lambdaM / lambda1 * mu1 - spec.true_mean(k)) * 16.0 / (gap * gap);
  }

  // Finite-budget dependent bound: phase accounting splits the arms at
  // epsilon; the best arm has gap 0 and lands in the small-gap group.
  double max_small_gap = 0.0;
  double above = 0.0, below = 0.0;
  for (int k = 0; k < K; ++k) {
    const double gap = mu1 - spec.true_mean(k);
    const double unit = lambdaM / lambda1 * mu1 - spec.true_mean(k);
    if (gap > epsilon) {
      above += unit * (16.0 / (gap * gap) * ln_clamped(budget * gap * gap / (16.0 * lambdaM)) +
                       48.0 / (gap * gap) + 1.0) +
               64.0 / gap;
    } else {
      max_small_gap = std::max(max_small_gap, gap);
      below += unit * (16.0 / (epsilon * epsilon) *
                           ln_clamped(budget * epsilon * epsilon / (16.0 * lambdaM)) +
                       32.0 / (3.0 * epsilon * epsilon) + 1.0) +
               64.0 / epsilon;
    }
  }
  r.finite_dep_ub = budget / lambda1 * max_small_gap + above + below;

  r.indep_ub = 2.0 *
               std::cbrt(16.0 * K * mu1 * lambdaM / lambda1 *
                         ln_clamped(budget / (16.0 * lambdaM))) *
               std::pow(budget / lambda1, 2.0 / 3.0);
  return r;
}

// Everything in one report, for the command-line `bounds` mode.
struct BoundReport {
  double delta = 0.0;
  PriorMeans prior;
  std::optional<BaiLowerBound> bai_lb;  // absent for non-bernoulli instances
  BaiUpperBounds bai_ub;
  HardnessReport hardness;
  Arm2Assumption assumption_arm2;
  std::optional<double> budget;
  std::optional<double> epsilon;
  std::optional<RegretBoundReport> regret;
};

inline BoundReport compute_bound_report(const InstanceSpec& spec,
                                        const PriorMeans& prior, double delta,
                                        double L,
                                        std::optional<double> budget = {},
                                        std::optional<double> epsilon = {}) {
  BoundReport rep;
  rep.delta = delta;
  rep.prior = prior;
  if (spec.distribution == Distribution::bernoulli &&
      spec.error_bounds.back() == 0.0 && delta < 1.0 / 2.4)
    rep.bai_lb = bai_lower_bound(spec, delta);
  rep.bai_ub = bai_upper_bounds(spec, prior, delta, L);
  rep.hardness = hardness(spec, prior);
  rep.assumption_arm2 = check_assumption_arm2(spec);
  rep.budget = budget;
  if (budget) {
    const double eps = epsilon ? *epsilon
                               : std::cbrt(spec.num_arms * std::log(*budget) / *budget);
    rep.epsilon = eps;
    rep.regret = regret_bounds(spec, *budget, eps);
  }
  return rep;
}

}  // namespace mfmab
