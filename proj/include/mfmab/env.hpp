#pragma once
// Seeded simulation environment. Executes (arm, fidelity) pulls against an
// instance, returns observations, and accounts cost. One environment per
// trial; trials running concurrently use disjoint environments.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mfmab/instance.hpp"
#include "mfmab/rng.hpp"

namespace mfmab {

struct PullRecord {
  double observation;
  std::uint32_t t;  // 1-based position in the pull log
  std::uint16_t arm;
  std::uint16_t fidelity;
};

class EnvState {
 public:
  EnvState(InstanceSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)),
        seed_(seed),
        rng_(seed),
        counts_(spec_.num_arms,
                std::vector<std::uint64_t>(spec_.num_fidelities, 0)) {}

  // Bernoulli instances draw 0/1 with the cell's mean as success probability;
  // deterministic instances return the mean itself (used by oracle tests).
  double pull(int arm, int fid) {
    if (arm < 0 || arm >= spec_.num_arms || fid < 0 || fid >= spec_.num_fidelities)
      throw std::out_of_range("pull index out of range");
    const double mu = spec_.mean(arm, fid);
    double x;
    if (spec_.distribution == Distribution::deterministic)
      x = mu;
    else
      x = rng_.next_u01() < mu ? 1.0 : 0.0;
    spent_ += spec_.costs[fid];
    ++counts_[arm][fid];
    log_.push_back({x, static_cast<std::uint32_t>(log_.size() + 1),
                    static_cast<std::uint16_t>(arm),
                    static_cast<std::uint16_t>(fid)});
    return x;
  }

  double spent() const { return spent_; }
  double remaining_budget(double budget) const { return budget - spent_; }
  bool can_afford(double budget, int fid) const {
    return spent_ + spec_.costs[fid] <= budget;  // exact boundary included
  }

  std::uint64_t pulls(int arm, int fid) const { return counts_[arm][fid]; }
  std::uint64_t total_pulls() const { return log_.size(); }
  const std::vector<PullRecord>& pull_log() const { return log_; }
  const InstanceSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

 private:
  InstanceSpec spec_;
  std::uint64_t seed_;
  SplitMix64 rng_;
  double spent_ = 0.0;
  std::vector<PullRecord> log_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

}  // namespace mfmab
