#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "mfmab/regret.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using mfmab::Distribution;
using mfmab::eliminate;
using mfmab::InstanceSpec;
using mfmab::phase_target;
using mfmab::RegretConfig;
using mfmab::run_regret;

namespace {

InstanceSpec two_arm(double mu_top1, double mu_top2, Distribution dist) {
  InstanceSpec spec;
  spec.num_arms = 2;
  spec.num_fidelities = 2;
  spec.costs = {1.0, 1.2};
  spec.error_bounds = {0.30, 0.0};
  spec.means = {{mu_top1 - 0.2, mu_top1}, {mu_top2 + 0.1, mu_top2}};
  spec.distribution = dist;
  return spec;
}

}  // namespace

TEST_CASE("phase targets follow the ceiling formula") {
  REQUIRE(phase_target(0, 10000.0, 1.2) == 10);  // ceil(ln 8333.3) = 10
  REQUIRE(phase_target(1, 10000.0, 1.2) == 31);  // ceil(4 ln 2083.3) = 31
  // Budget = 2^{2p} * cost * e makes the log exactly one.
  REQUIRE(phase_target(2, 16.0 * 1.3 * std::exp(1.0), 1.3) == 16);
  // The loop ends once the log argument falls to one.
  REQUIRE(phase_target(0, 1.2, 1.2) == 0);
  REQUIRE(phase_target(5, 100.0, 1.2) == 0);
}

TEST_CASE("elimination keeps arms within the phase slack") {
  const std::vector<int> arms{0, 1, 2};
  const std::vector<double> means{0.9, 0.8, 0.1};
  // Phase 0 slack is 2: everything survives.
  REQUIRE(eliminate(arms, means, 0) == arms);
  // Phase 3 slack is 0.25: survivors need a mean above 0.65.
  REQUIRE(eliminate(arms, means, 3) == std::vector<int>{0, 1});
  // Singletons pass through.
  REQUIRE(eliminate({4}, {0.2}, 6) == std::vector<int>{4});
}

TEST_CASE("the empirical maximizer always survives elimination") {
  mfmab::SplitMix64 rng(101);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng.next() % 8);
    std::vector<int> arms(n);
    std::vector<double> means(n);
    int best = 0;
    for (int k = 0; k < n; ++k) {
      arms[k] = k;
      means[k] = rng.next_u01();
      if (means[k] > means[best]) best = k;
    }
    const int phase = static_cast<int>(rng.next() % 12);
    const auto kept = eliminate(arms, means, phase);
    REQUIRE_FALSE(kept.empty());
    REQUIRE(std::find(kept.begin(), kept.end(), best) != kept.end());
    // Nested subset of the input.
    for (int k : kept)
      REQUIRE(std::find(arms.begin(), arms.end(), k) != arms.end());
  }
}

TEST_CASE("deterministic two-arm run eliminates at the predicted phase") {
  // Dyadic costs keep the whole budget ledger exact in floating point.
  InstanceSpec spec = two_arm(0.9, 0.1, Distribution::deterministic);
  spec.costs = {1.0, 1.25};
  RegretConfig cfg;
  cfg.budget = 2000.0;
  cfg.epsilon = 0.1;
  const auto result = run_regret(spec, cfg, 11);

  // Slack 2^{-p+1} first drops to the gap 0.8 at phase 2.
  REQUIRE(result.phases.size() == 3);
  REQUIRE(result.phases[0].candidates_after == std::vector<int>{0, 1});
  REQUIRE(result.phases[1].candidates_after == std::vector<int>{0, 1});
  REQUIRE(result.phases[2].candidates_after == std::vector<int>{0});
  REQUIRE(result.final_candidates == std::vector<int>{0});
  REQUIRE_FALSE(result.exploration_truncated);

  // Cumulative targets: ceil(ln 1600), ceil(4 ln 400), ceil(16 ln 100).
  REQUIRE(result.phases[0].target == 8);
  REQUIRE(result.phases[1].target == 24);
  REQUIRE(result.phases[2].target == 74);

  // Exploration: 74 top-fidelity pulls per arm, cost 185 exactly; the
  // remaining 1815 budget exploits arm 0 at unit cost.
  REQUIRE(result.total_pulls == 148 + 1815);
  REQUIRE(result.total_cost == 2000.0);
  const double expected_regret =
      2000.0 / 1.0 * 0.9 - (74 * 0.9 + 74 * 0.1 + 1815 * 0.9);
  REQUIRE_THAT(result.pseudo_regret, WithinRel(expected_regret, 1e-12));
  REQUIRE_THAT(result.realized_regret, WithinAbs(result.pseudo_regret, 1e-9));

  // Budget is hard: never exceeded, and nothing affordable remains.
  REQUIRE(result.total_cost <= 2000.0);
  REQUIRE(2000.0 - result.total_cost < spec.costs[0]);
}

TEST_CASE("pseudo-regret of hand-built pull logs") {
  const InstanceSpec spec = two_arm(0.9, 0.1, Distribution::deterministic);
  // Always pulling the best arm at the cheapest fidelity earns zero regret.
  std::vector<mfmab::PullRecord> log;
  for (int i = 0; i < 10; ++i)
    log.push_back({0.9, static_cast<std::uint32_t>(i + 1), 0, 0});
  REQUIRE_THAT(mfmab::pseudo_regret_from_log(spec, 10.0, log),
               WithinAbs(0.0, 1e-12));

  // One top-fidelity pull of the best arm with the budget exactly spent:
  // (1.2/1) * 0.9 - 0.9 = 0.18.
  std::vector<mfmab::PullRecord> one{{0.9, 1, 0, 1}};
  REQUIRE_THAT(mfmab::pseudo_regret_from_log(spec, 1.2, one),
               WithinRel(0.18, 1e-12));
}

TEST_CASE("budget ledger invariants hold on random instances") {
  mfmab::SplitMix64 rng(303);
  for (int i = 0; i < 60; ++i) {
    const InstanceSpec spec = oracles::random_instance(rng);
    RegretConfig cfg;
    cfg.budget = spec.top_cost() * (2.0 + 400.0 * rng.next_u01());
    const auto result = run_regret(spec, cfg, rng.next());

    REQUIRE(result.total_cost <= cfg.budget);
    REQUIRE(cfg.budget - result.total_cost < spec.base_cost());
    REQUIRE_THAT(result.realized_regret, WithinAbs(result.pseudo_regret, 1e-9));

    // Candidate sets are nested and never empty.
    std::vector<int> prev;
    for (int k = 0; k < spec.num_arms; ++k) prev.push_back(k);
    for (const auto& phase : result.phases) {
      REQUIRE(phase.candidates_before == prev);
      REQUIRE_FALSE(phase.candidates_after.empty());
      const std::set<int> before(phase.candidates_before.begin(),
                                 phase.candidates_before.end());
      for (int k : phase.candidates_after) REQUIRE(before.count(k) == 1);
      prev = phase.candidates_after;
    }
    REQUIRE(result.final_candidates == prev);
  }
}

TEST_CASE("deterministic feedback with a comfortable margin leaves only the best arm") {
  mfmab::SplitMix64 rng(404);
  for (int i = 0; i < 40; ++i) {
    InstanceSpec spec = oracles::random_instance(rng);
    spec.distribution = Distribution::deterministic;
    const double gap = spec.true_mean(0) - spec.true_mean(1);
    RegretConfig cfg;
    cfg.budget = 500000.0 * spec.top_cost();
    cfg.epsilon = gap / 2.0;  // half the gap: the final phase can separate
    const auto result = run_regret(spec, cfg, rng.next());
    REQUIRE(result.final_candidates == std::vector<int>{0});
  }
}

TEST_CASE("running out of budget mid-phase is flagged as truncation") {
  const InstanceSpec spec = two_arm(0.9, 0.1, Distribution::deterministic);
  RegretConfig cfg;
  cfg.budget = 2.0;  // affords one top-fidelity pull, not two
  const auto result = run_regret(spec, cfg, 5);
  REQUIRE(result.exploration_truncated);
  REQUIRE(result.final_candidates == std::vector<int>{0, 1});
  REQUIRE(result.total_cost <= 2.0);
  REQUIRE(2.0 - result.total_cost < spec.costs[0]);
}

TEST_CASE("insufficient budget or epsilon is rejected") {
  const InstanceSpec spec = two_arm(0.9, 0.1, Distribution::deterministic);
  RegretConfig cfg;
  cfg.budget = 1.0;  // below the top-fidelity cost
  REQUIRE_THROWS_AS(run_regret(spec, cfg, 1), std::invalid_argument);
  cfg.budget = 100.0;
  cfg.epsilon = -0.5;
  REQUIRE_THROWS_AS(run_regret(spec, cfg, 1), std::invalid_argument);
}

TEST_CASE("a tiny epsilon raises the advisory flag") {
  const InstanceSpec spec = two_arm(0.9, 0.1, Distribution::deterministic);
  RegretConfig cfg;
  cfg.budget = 100.0;
  cfg.epsilon = 1e-3;  // below e/budget
  REQUIRE(run_regret(spec, cfg, 1).epsilon_below_recommended);
  cfg.epsilon = 0.5;
  REQUIRE_FALSE(run_regret(spec, cfg, 1).epsilon_below_recommended);
}

TEST_CASE("default epsilon follows the budget") {
  REQUIRE_THAT(mfmab::default_epsilon(2, 100000.0),
               WithinRel(std::cbrt(2.0 * std::log(100000.0) / 100000.0), 1e-12));
}
