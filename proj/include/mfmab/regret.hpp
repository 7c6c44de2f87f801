#pragma once
// Regret minimization under a cost budget.
//
// Reward model: each pull earns the pulled arm's true (top-fidelity) mean,
// whatever fidelity was chosen; fidelity only changes the observation
// accuracy and the cost. The optimal policy therefore pulls the best arm at
// the cheapest fidelity, and the per-trajectory (pseudo) regret of a pull
// log is
//
//   R = (budget / lambda^(1)) * mu_1^(M) - sum_t mu_{I_t}^(M).
//
// The elimination algorithm explores in phases p = 0, 1, ... while
// p < log2(2/epsilon) and more than one candidate remains: every candidate
// is pulled at the top fidelity up to the cumulative target
//
//   T(p) = ceil( 2^{2p} * ln( budget / (2^{2p} lambda^(M)) ) ),
//
// then arms whose empirical mean trails the best by at least 2^{-p+1} are
// dropped. Afterwards the surviving arms are pulled round-robin at the
// cheapest fidelity until no pull is affordable. Earlier top-fidelity
// samples are reused: targets are cumulative and means average everything
// collected so far.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfmab/env.hpp"
#include "mfmab/instance.hpp"

namespace mfmab {

struct RegretConfig {
  double budget = 0.0;
  // Elimination depth parameter; defaults to (K ln(budget) / budget)^(1/3).
  std::optional<double> epsilon;
};

struct PhaseTrace {
  int phase = 0;
  std::uint64_t target = 0;               // cumulative per-arm pull target
  std::vector<int> candidates_before;
  std::vector<double> means;              // aligned with candidates_before
  std::vector<int> candidates_after;
  bool completed = false;                 // false when the budget ran out mid-phase
};

struct RegretResult {
  double realized_regret = 0.0;  // maintained incrementally during the run
  double pseudo_regret = 0.0;    // recomputed from the pull log afterwards
  std::uint64_t total_pulls = 0;
  double total_cost = 0.0;
  std::vector<PhaseTrace> phases;
  std::vector<int> final_candidates;
  bool exploration_truncated = false;
  bool epsilon_below_recommended = false;  // epsilon <= e / budget
};

// Cumulative per-arm pull target of a phase; 0 once the log argument drops
// to 1 or below, which ends the phase loop.
inline std::uint64_t phase_target(int phase, double budget, double top_cost) {
  const double scale = std::ldexp(1.0, 2 * phase);  // 2^{2p}
  const double arg = budget / (scale * top_cost);
  if (arg <= 1.0) return 0;
  return static_cast<std::uint64_t>(std::ceil(scale * std::log(arg)));
}

inline double default_epsilon(int num_arms, double budget) {
  return std::cbrt(num_arms * std::log(budget) / budget);
}

// Keep the candidates whose mean is within 2^{-p+1} of the best; the
// empirical maximizer always survives. means[i] belongs to candidates[i].
inline std::vector<int> eliminate(const std::vector<int>& candidates,
                                  const std::vector<double>& means, int phase) {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : means) best = std::max(best, v);
  const double slack = std::ldexp(1.0, -phase + 1);  // 2^{-p+1}
  std::vector<int> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (means[i] + slack > best) kept.push_back(candidates[i]);
  return kept;
}

inline double pseudo_regret_from_log(const InstanceSpec& spec, double budget,
                                     std::span<const PullRecord> log) {
  double earned = 0.0;
  for (const auto& rec : log) earned += spec.true_mean(rec.arm);
  return budget / spec.base_cost() * spec.true_mean(0) - earned;
}

inline RegretResult run_regret(const InstanceSpec& spec, const RegretConfig& cfg,
                               std::uint64_t seed) {
  const int K = spec.num_arms;
  const int M = spec.num_fidelities;
  const double budget = cfg.budget;
  if (!(budget >= spec.top_cost()))
    throw std::invalid_argument("budget must afford at least one top-fidelity pull");
  const double eps = cfg.epsilon ? *cfg.epsilon : default_epsilon(K, budget);
  if (!(eps > 0.0))
    throw std::invalid_argument("epsilon must be positive");

  RegretResult result;
  result.epsilon_below_recommended = eps <= std::exp(1.0) / budget;

  EnvState env(spec, seed);
  std::vector<std::uint64_t> top_pulls(K, 0);
  std::vector<double> top_sum(K, 0.0);
  double earned = 0.0;
  auto pull = [&](int arm, int fid) {
    const double x = env.pull(arm, fid);
    earned += spec.true_mean(arm);
    if (fid == M - 1) {
      ++top_pulls[arm];
      top_sum[arm] += x;
    }
  };

  std::vector<int> candidates(K);
  for (int k = 0; k < K; ++k) candidates[k] = k;

  const double phase_bound = std::log2(2.0 / eps);
  bool truncated = false;
  for (int p = 0; p < phase_bound && candidates.size() > 1 && !truncated; ++p) {
    const std::uint64_t target = phase_target(p, budget, spec.top_cost());
    if (target == 0) break;
    PhaseTrace trace;
    trace.phase = p;
    trace.target = target;
    trace.candidates_before = candidates;
    for (int k : candidates) {
      while (top_pulls[k] < target) {
        if (!env.can_afford(budget, M - 1)) {
          truncated = true;
          break;
        }
        pull(k, M - 1);
      }
      if (truncated) break;
    }
    if (truncated) {
      trace.candidates_after = candidates;
      result.phases.push_back(std::move(trace));
      break;
    }
    trace.means.reserve(candidates.size());
    for (int k : candidates)
      trace.means.push_back(top_sum[k] / static_cast<double>(top_pulls[k]));
    candidates = eliminate(candidates, trace.means, p);
    trace.candidates_after = candidates;
    trace.completed = true;
    result.phases.push_back(std::move(trace));
  }

  // Exploitation: round-robin over the survivors at the cheapest fidelity.
  // The budget is a hard constraint; at termination no pull is affordable.
  std::size_t rotation = 0;
  while (env.can_afford(budget, 0)) {
    pull(candidates[rotation % candidates.size()], 0);
    ++rotation;
  }

  result.realized_regret = budget / spec.base_cost() * spec.true_mean(0) - earned;
  result.pseudo_regret = pseudo_regret_from_log(spec, budget, env.pull_log());
  result.total_pulls = env.total_pulls();
  result.total_cost = env.spent();
  result.final_candidates = candidates;
  result.exploration_truncated = truncated;
  return result;
}

}  // namespace mfmab
