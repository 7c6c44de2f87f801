#pragma once
// Best-arm identification with fixed confidence.
//
// LUCB loop: each round selects the two arms with the highest UCB indexes
// (the leader ell_t and the runner-up u_t), explores both through a
// fidelity-selection procedure, and stops once LCB(ell_t) > UCB(u_t).
//
// Confidence radius:  beta(n, t, delta) = sqrt(log(L t^4 / delta) / n).
// Per-fidelity bounds on the true (top-fidelity) mean:
//   UCB_k^(m) = muhat_k^(m) + zeta^(m) + beta,
//   LCB_k^(m) = muhat_k^(m) - zeta^(m) - beta,
// and the arm-level bounds take the tightest over fidelities:
//   UCB_k = min_m UCB_k^(m),  LCB_k = max_m LCB_k^(m).
//
// Fidelity selection per explored arm:
//   A: optimistic index over the normalized gap estimate,
//        f-UCB_k^(m) = dhat_k^(m)/sqrt(lambda^(m))
//                      + sqrt(2 log N_k / (lambda^(m) n_k^(m))),
//      after a round-robin bootstrap that pulls every fidelity once.
//   B: uniform exploration (one pull per fidelity per call) until the commit
//      test  max_m dhat_k^(m)/sqrt(lambda^(m))
//              > 3 sqrt(log(L/delta) / (lambda^(1) n))   (n = common count)
//      passes; from then on, single pulls at the committed fidelity.
//   C: lowest fidelity whose radius still dominates its error bound,
//        m = min{ m : beta(n_k^(m), t, delta) >= zeta^(m) },
//      needing no prior input.
//
// dhat is the plug-in gap estimate against the prior proxies:
//   dhat_k^(m) = mu1_tilde - (muhat_k^(m) + zeta^(m))      k != ell_t
//   dhat_k^(m) = (muhat_k^(m) - zeta^(m)) - mu2_tilde      k  = ell_t

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfmab/env.hpp"
#include "mfmab/instance.hpp"

namespace mfmab {

enum class ExploreProcedure { A, B, C };

enum class BaiTermination { stopping_rule, cap };

struct BaiConfig {
  double delta = 0.1;
  // The L factor in the radius; <= 0 selects the default 4*K*M, the smallest
  // value the correctness guarantee asks for.
  double confidence_factor = 0.0;
  ExploreProcedure procedure = ExploreProcedure::A;
  std::optional<PriorMeans> prior;  // required by procedures A and B
  // Guards against runs that cannot stop (e.g. a prior that makes every
  // ancillary gap non-positive).
  std::uint64_t max_pulls = 10'000'000;
};

struct BaiRunState {
  int num_arms = 0;
  int num_fidelities = 0;
  std::vector<std::vector<std::uint64_t>> n;    // pulls per (arm, fidelity)
  std::vector<std::vector<double>> sum;         // observation sums
  std::vector<std::uint64_t> n_arm;             // per-arm totals
  std::vector<char> is_fixed;                   // procedure B commit flags
  std::vector<int> committed;                   // committed fidelity, -1 before
  std::uint64_t t = 1;                          // round counter
  int ell = 0;                                  // current leader
  int u = 1;                                    // current runner-up

  double mean(int arm, int fid) const {
    return n[arm][fid] ? sum[arm][fid] / static_cast<double>(n[arm][fid]) : 0.0;
  }
};

inline BaiRunState make_bai_state(int num_arms, int num_fidelities) {
  BaiRunState s;
  s.num_arms = num_arms;
  s.num_fidelities = num_fidelities;
  s.n.assign(num_arms, std::vector<std::uint64_t>(num_fidelities, 0));
  s.sum.assign(num_arms, std::vector<double>(num_fidelities, 0.0));
  s.n_arm.assign(num_arms, 0);
  s.is_fixed.assign(num_arms, 0);
  s.committed.assign(num_arms, -1);
  return s;
}

struct BaiResult {
  int chosen_arm = -1;  // canonical arm index
  double total_cost = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t total_pulls = 0;
  std::vector<std::vector<std::uint64_t>> pull_counts;
  BaiTermination terminated_by = BaiTermination::stopping_rule;
};

// The round-dependent part of the radius, log(L t^4 / delta), kept separate
// so the inner loop computes it once per round rather than once per cell.
inline double radius_log_term(std::uint64_t t, const BaiConfig& cfg) {
  double g = std::log(cfg.confidence_factor / cfg.delta) +
             4.0 * std::log(static_cast<double>(t));
  return g < 0.0 ? 0.0 : g;
}

inline double radius_given(std::uint64_t n, double log_term) {
  if (n == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(log_term / static_cast<double>(n));
}

// beta(n, t, delta) with the L factor from cfg. n = 0 yields +inf, which
// forces exploration of unpulled cells.
inline double confidence_radius(std::uint64_t n, std::uint64_t t,
                                const BaiConfig& cfg) {
  return radius_given(n, radius_log_term(t, cfg));
}

inline double ancillary_gap_estimate(const BaiRunState& s,
                                     const InstanceSpec& spec,
                                     const PriorMeans& prior, int arm, int fid) {
  const double zeta = spec.error_bounds[fid];
  if (arm == s.ell) return (s.mean(arm, fid) - zeta) - prior.mu2_tilde;
  return prior.mu1_tilde - (s.mean(arm, fid) + zeta);
}

// Arm-level (UCB, LCB). An arm that was never pulled keeps its
// initialization values (1, 0); fidelities with no pulls never win the
// min/max because their radius is infinite.
inline std::pair<double, double> ucb_lcb_given(const BaiRunState& s,
                                               const InstanceSpec& spec,
                                               double log_term, int arm) {
  if (s.n_arm[arm] == 0) return {1.0, 0.0};
  double ucb = std::numeric_limits<double>::infinity();
  double lcb = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < s.num_fidelities; ++m) {
    if (s.n[arm][m] == 0) continue;
    const double beta = radius_given(s.n[arm][m], log_term);
    const double zeta = spec.error_bounds[m];
    const double mu = s.mean(arm, m);
    ucb = std::min(ucb, mu + zeta + beta);
    lcb = std::max(lcb, mu - zeta - beta);
  }
  return {ucb, lcb};
}

inline std::pair<double, double> ucb_lcb(const BaiRunState& s,
                                         const InstanceSpec& spec,
                                         const BaiConfig& cfg, int arm) {
  return ucb_lcb_given(s, spec, radius_log_term(s.t, cfg), arm);
}

// Top two UCB indexes; ties resolve to the lowest arm index.
inline std::pair<int, int> select_critical_arms_given(const BaiRunState& s,
                                                      const InstanceSpec& spec,
                                                      double log_term) {
  int ell = -1, u = -1;
  double best = -std::numeric_limits<double>::infinity();
  double second = best;
  for (int k = 0; k < s.num_arms; ++k) {
    const double v = ucb_lcb_given(s, spec, log_term, k).first;
    if (v > best) {
      second = best;
      u = ell;
      best = v;
      ell = k;
    } else if (v > second) {
      second = v;
      u = k;
    }
  }
  return {ell, u};
}

inline std::pair<int, int> select_critical_arms(const BaiRunState& s,
                                                const InstanceSpec& spec,
                                                const BaiConfig& cfg) {
  return select_critical_arms_given(s, spec, radius_log_term(s.t, cfg));
}

// Procedure A's fidelity choice once every fidelity has been pulled once.
inline int choose_fidelity_a(const BaiRunState& s, const InstanceSpec& spec,
                             const PriorMeans& prior, int arm) {
  const double ln_total = std::log(static_cast<double>(s.n_arm[arm]));
  int arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < s.num_fidelities; ++m) {
    const double lambda = spec.costs[m];
    const double index =
        ancillary_gap_estimate(s, spec, prior, arm, m) / std::sqrt(lambda) +
        std::sqrt(2.0 * ln_total /
                  (lambda * static_cast<double>(s.n[arm][m])));
    if (index > best) {
      best = index;
      arg = m;
    }
  }
  return arg;
}

// Procedure B's commit test over the common per-fidelity count. Uniform
// exploration keeps the counts equal; the conservative min is used in case
// they are not. Returns true when committing, with the argmax fidelity.
inline bool explore_b_commit_test(const BaiRunState& s, const InstanceSpec& spec,
                                  const BaiConfig& cfg, const PriorMeans& prior,
                                  int arm, int* commit_fid) {
  std::uint64_t n_common = s.n[arm][0];
  for (int m = 1; m < s.num_fidelities; ++m)
    n_common = std::min(n_common, s.n[arm][m]);
  if (n_common == 0) return false;
  int arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < s.num_fidelities; ++m) {
    const double v = ancillary_gap_estimate(s, spec, prior, arm, m) /
                     std::sqrt(spec.costs[m]);
    if (v > best) {
      best = v;
      arg = m;
    }
  }
  const double threshold =
      3.0 * std::sqrt(std::log(cfg.confidence_factor / cfg.delta) /
                      (spec.base_cost() * static_cast<double>(n_common)));
  if (best > threshold) {
    *commit_fid = arg;
    return true;
  }
  return false;
}

// Procedure C's fidelity choice: the lowest fidelity whose radius has not yet
// shrunk below its error bound. Since zeta at the top fidelity is normally 0,
// the set is normally non-empty; otherwise the top fidelity is the fallback.
inline int choose_fidelity_c_given(const BaiRunState& s, const InstanceSpec& spec,
                                   double log_term, int arm,
                                   bool* fell_back = nullptr) {
  for (int m = 0; m < s.num_fidelities; ++m)
    if (radius_given(s.n[arm][m], log_term) >= spec.error_bounds[m]) {
      if (fell_back) *fell_back = false;
      return m;
    }
  if (fell_back) *fell_back = true;
  return s.num_fidelities - 1;
}

inline int choose_fidelity_c(const BaiRunState& s, const InstanceSpec& spec,
                             const BaiConfig& cfg, int arm, bool* fell_back = nullptr) {
  return choose_fidelity_c_given(s, spec, radius_log_term(s.t, cfg), arm, fell_back);
}

class BaiRunner {
 public:
  BaiRunner(EnvState& env, BaiConfig cfg)
      : env_(&env), cfg_(std::move(cfg)),
        s_(make_bai_state(env.spec().num_arms, env.spec().num_fidelities)) {
    const auto& spec = env.spec();
    if (spec.num_arms < 2)
      throw std::invalid_argument("best-arm identification requires K>=2");
    if (!(cfg_.delta > 0.0 && cfg_.delta < 1.0))
      throw std::invalid_argument("delta must lie in (0,1)");
    if (cfg_.confidence_factor <= 0.0)
      cfg_.confidence_factor = 4.0 * spec.num_arms * spec.num_fidelities;
    if (cfg_.procedure != ExploreProcedure::C) {
      if (!cfg_.prior)
        throw std::invalid_argument("procedures A and B require prior means");
      check_prior(*cfg_.prior);
    }
    log_term_ = radius_log_term(s_.t, cfg_);
  }

  const BaiRunState& state() const { return s_; }
  const BaiConfig& config() const { return cfg_; }
  const EnvState& env() const { return *env_; }
  std::uint64_t fallback_count() const { return c_fallbacks_; }

  std::pair<double, double> bounds(int arm) const {
    return ucb_lcb_given(s_, env_->spec(), log_term_, arm);
  }

  int explore_a_step(int arm) {
    for (int m = 0; m < s_.num_fidelities; ++m)
      if (s_.n[arm][m] == 0) {  // bootstrap: every fidelity once
        pull(arm, m);
        return m;
      }
    const int m = choose_fidelity_a(s_, env_->spec(), *cfg_.prior, arm);
    pull(arm, m);
    return m;
  }

  std::vector<int> explore_b_step(int arm) {
    if (s_.is_fixed[arm]) {
      pull(arm, s_.committed[arm]);
      return {s_.committed[arm]};
    }
    std::vector<int> pulled(s_.num_fidelities);
    for (int m = 0; m < s_.num_fidelities; ++m) {
      pull(arm, m);
      pulled[m] = m;
    }
    int fid = -1;
    if (explore_b_commit_test(s_, env_->spec(), cfg_, *cfg_.prior, arm, &fid)) {
      s_.committed[arm] = fid;
      s_.is_fixed[arm] = 1;
    }
    return pulled;
  }

  int explore_c_step(int arm) {
    bool fell_back = false;
    const int m =
        choose_fidelity_c_given(s_, env_->spec(), log_term_, arm, &fell_back);
    if (fell_back) ++c_fallbacks_;
    pull(arm, m);
    return m;
  }

  void explore(int arm) {
    switch (cfg_.procedure) {
      case ExploreProcedure::A: explore_a_step(arm); break;
      case ExploreProcedure::B: explore_b_step(arm); break;
      case ExploreProcedure::C: explore_c_step(arm); break;
    }
  }

  // The full LUCB loop. The stopping rule is evaluated at the top of each
  // round against the critical arms chosen in the previous round, then the
  // pair is re-selected and both arms are explored (runner-up first).
  BaiResult run(const std::function<void(const BaiRunner&)>& on_round = {}) {
    const auto& spec = env_->spec();
    BaiTermination reason = BaiTermination::cap;
    while (true) {
      const double leader_lcb = bounds(s_.ell).second;
      const double runner_ucb = bounds(s_.u).first;
      if (leader_lcb > runner_ucb) {
        reason = BaiTermination::stopping_rule;
        break;
      }
      if (env_->total_pulls() >= cfg_.max_pulls) break;
      std::tie(s_.ell, s_.u) = select_critical_arms_given(s_, spec, log_term_);
      explore(s_.u);
      explore(s_.ell);
      if (on_round) on_round(*this);
      ++s_.t;
      log_term_ = radius_log_term(s_.t, cfg_);
    }
    BaiResult r;
    r.chosen_arm = s_.ell;
    r.total_cost = env_->spent();
    r.rounds = s_.t - 1;
    r.total_pulls = env_->total_pulls();
    r.pull_counts = s_.n;
    r.terminated_by = reason;
    return r;
  }

 private:
  void pull(int arm, int fid) {
    const double x = env_->pull(arm, fid);
    ++s_.n[arm][fid];
    s_.sum[arm][fid] += x;
    ++s_.n_arm[arm];
  }

  EnvState* env_;
  BaiConfig cfg_;
  BaiRunState s_;
  double log_term_ = 0.0;
  std::uint64_t c_fallbacks_ = 0;
};

// Convenience one-shot run on a canonical instance.
inline BaiResult run_bai(const InstanceSpec& spec, const BaiConfig& cfg,
                         std::uint64_t seed,
                         const std::function<void(const BaiRunner&)>& on_round = {}) {
  EnvState env(spec, seed);
  BaiRunner runner(env, cfg);
  return runner.run(on_round);
}

}  // namespace mfmab
