#pragma once
// Reward gaps and hardness coefficients.
//
// For a canonical instance, the gap of arm k at fidelity m is
//
//   delta[k][m] = mu_1^(M) - (mu_k^(m) + zeta^(m))        k != best
//   delta[0][m] = (mu_1^(m) - zeta^(m)) - mu_2^(M)        k  = best
//
// i.e. the separation between the best arm's true mean and what fidelity m
// can certify about arm k. Gaps may be negative (the fidelity cannot
// distinguish the arm); consumers filter by positivity.
//
// The most efficient fidelity for exploring arm k maximizes
// delta[k][m] / sqrt(lambda[m]), equivalently minimizes lambda[m]/delta^2
// over the fidelities with a positive gap.
//
// Ancillary gaps replace the unknown top-two true means with the prior
// proxies (mu1_tilde, mu2_tilde).
//
// Hardness coefficients:
//   H        = sum_k lambda[m*_k] / delta[k][m*_k]^2
//   H_tilde  = same with ancillary gaps and their optimal fidelities
//   G_tilde  = sum_k sum_{m != m~*_k} (v_k[m~*_k] - v_k[m])^-2,
//              v_k[m] = ancillary delta / sqrt(lambda[m])
//   m_dagger_k = min{ m : delta[k][m] > 2 zeta[m] }   (may not exist)
//   H_dagger = sum_k lambda[m_dagger_k] / delta[k][m_dagger_k]^2
//   Q        = sum_k sum_{m < m_dagger_k} lambda[m] / zeta[m]^2

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfmab/instance.hpp"

namespace mfmab {

struct GapTable {
  int num_arms = 0;
  int num_fidelities = 0;
  std::vector<std::vector<double>> delta;  // delta[arm][fidelity]

  double at(int arm, int fid) const { return delta[arm][fid]; }
};

namespace detail {

// Shared by the true and ancillary variants; mu1/mu2 are the reference means
// the gaps are measured against.
inline GapTable gaps_against(const InstanceSpec& spec, double mu1, double mu2) {
  const int K = spec.num_arms;
  const int M = spec.num_fidelities;
  if (K < 2) throw std::invalid_argument("gap table requires K>=2");
  GapTable g{K, M, std::vector<std::vector<double>>(K, std::vector<double>(M))};
  for (int m = 0; m < M; ++m) {
    const double zeta = spec.error_bounds[m];
    g.delta[0][m] = (spec.mean(0, m) - zeta) - mu2;
    for (int k = 1; k < K; ++k)
      g.delta[k][m] = mu1 - (spec.mean(k, m) + zeta);
  }
  return g;
}

}  // namespace detail

inline GapTable reward_gaps(const InstanceSpec& spec) {
  return detail::gaps_against(spec, spec.true_mean(0), spec.true_mean(1));
}

inline GapTable ancillary_gaps(const InstanceSpec& spec, const PriorMeans& prior) {
  check_prior(prior);
  return detail::gaps_against(spec, prior.mu1_tilde, prior.mu2_tilde);
}

// argmax_m delta/sqrt(lambda), ties to the lowest fidelity index. Throws when
// an arm has no fidelity with a positive gap.
inline std::vector<int> optimal_fidelity(const GapTable& gaps,
                                         const std::vector<double>& costs) {
  std::vector<int> best(gaps.num_arms);
  for (int k = 0; k < gaps.num_arms; ++k) {
    int arg = 0;
    double val = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < gaps.num_fidelities; ++m) {
      const double v = gaps.delta[k][m] / std::sqrt(costs[m]);
      if (v > val) {
        val = v;
        arg = m;
      }
    }
    if (!(gaps.delta[k][arg] > 0.0))
      throw std::domain_error("arm " + std::to_string(k + 1) +
                              " indistinguishable at every fidelity");
    best[k] = arg;
  }
  return best;
}

struct HardnessReport {
  std::vector<int> m_star;                    // per arm, true gaps
  std::vector<int> m_tilde_star;              // per arm, ancillary gaps
  std::vector<std::optional<int>> m_dagger;   // per arm, may be absent
  double H = 0.0;
  double H_tilde = 0.0;
  double G_tilde = 0.0;
  std::optional<double> H_dagger;  // absent when any arm lacks m_dagger
  std::optional<double> Q;
};

inline HardnessReport hardness(const InstanceSpec& spec, const PriorMeans& prior) {
  const int K = spec.num_arms;
  const int M = spec.num_fidelities;
  const GapTable g = reward_gaps(spec);
  const GapTable gt = ancillary_gaps(spec, prior);

  HardnessReport r;
  r.m_star = optimal_fidelity(g, spec.costs);
  r.m_tilde_star = optimal_fidelity(gt, spec.costs);

  for (int k = 0; k < K; ++k) {
    const int ms = r.m_star[k];
    r.H += spec.costs[ms] / (g.delta[k][ms] * g.delta[k][ms]);
    const int mt = r.m_tilde_star[k];
    r.H_tilde += spec.costs[mt] / (gt.delta[k][mt] * gt.delta[k][mt]);
    const double vstar = gt.delta[k][mt] / std::sqrt(spec.costs[mt]);
    for (int m = 0; m < M; ++m) {
      if (m == mt) continue;
      const double d = vstar - gt.delta[k][m] / std::sqrt(spec.costs[m]);
      r.G_tilde += 1.0 / (d * d);
    }
  }

  r.m_dagger.resize(K);
  bool all_defined = true;
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m)
      if (g.delta[k][m] > 2.0 * spec.error_bounds[m]) {
        r.m_dagger[k] = m;
        break;
      }
    if (!r.m_dagger[k]) all_defined = false;
  }
  if (all_defined) {
    double hd = 0.0, q = 0.0;
    for (int k = 0; k < K; ++k) {
      const int md = *r.m_dagger[k];
      hd += spec.costs[md] / (g.delta[k][md] * g.delta[k][md]);
      for (int m = 0; m < md; ++m)
        q += spec.costs[m] / (spec.error_bounds[m] * spec.error_bounds[m]);
    }
    r.H_dagger = hd;
    r.Q = q;
  }
  return r;
}

}  // namespace mfmab
