#include <catch2/catch_amalgamated.hpp>

#include "mfmab/env.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using mfmab::Distribution;
using mfmab::EnvState;
using mfmab::InstanceSpec;

TEST_CASE("deterministic pulls return the exact mean and charge the cost") {
  InstanceSpec spec = oracles::load("k5_m3.json");
  spec.distribution = Distribution::deterministic;
  EnvState env(spec, 1);
  REQUIRE(env.pull(0, 2) == 0.90);
  REQUIRE_THAT(env.spent(), WithinRel(1.2, 1e-15));
  REQUIRE(env.pull(4, 0) == 0.30);
  REQUIRE_THAT(env.spent(), WithinRel(2.2, 1e-15));
}

TEST_CASE("degenerate bernoulli cells are constant") {
  InstanceSpec spec;
  spec.num_arms = 2;
  spec.num_fidelities = 1;
  spec.costs = {1.0};
  spec.error_bounds = {0.0};
  spec.means = {{1.0}, {0.0}};
  EnvState env(spec, 99);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(env.pull(0, 0) == 1.0);
    REQUIRE(env.pull(1, 0) == 0.0);
  }
}

TEST_CASE("bernoulli sample means concentrate on the cell mean") {
  const InstanceSpec spec = oracles::load("k5_m3.json");
  EnvState env(spec, 424242);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += env.pull(4, 0);
  REQUIRE_THAT(sum / n, WithinAbs(0.30, 0.01));
}

TEST_CASE("same seed and action sequence reproduce observations bit-exactly") {
  const InstanceSpec spec = oracles::load("k5_m3.json");
  mfmab::SplitMix64 actions(7);
  std::vector<std::pair<int, int>> seq;
  for (int i = 0; i < 500; ++i)
    seq.push_back({static_cast<int>(actions.next() % 5),
                   static_cast<int>(actions.next() % 3)});
  EnvState a(spec, 1234), b(spec, 1234);
  for (auto [arm, fid] : seq) REQUIRE(a.pull(arm, fid) == b.pull(arm, fid));
  REQUIRE(a.spent() == b.spent());
}

TEST_CASE("trial streams are independent of execution order") {
  const InstanceSpec spec = oracles::load("k5_m3.json");
  auto run_trial = [&](int trial) {
    EnvState env(spec, mfmab::trial_seed(555, 0, trial));
    std::vector<double> obs;
    for (int i = 0; i < 100; ++i) obs.push_back(env.pull(i % 5, i % 3));
    return obs;
  };
  const auto first_then_second = std::pair{run_trial(0), run_trial(1)};
  const auto second_then_first = std::pair{run_trial(1), run_trial(0)};
  REQUIRE(first_then_second.first == second_then_first.second);
  REQUIRE(first_then_second.second == second_then_first.first);
}

TEST_CASE("budget accounting includes the exact boundary") {
  const InstanceSpec spec = oracles::load("k5_m3.json");
  EnvState env(spec, 1);
  REQUIRE(env.remaining_budget(10.0) == 10.0);
  // 9 pulls at the cheapest fidelity cost 9.0: a 1.2 pull no longer fits,
  // but from 8.8 it fits exactly.
  for (int i = 0; i < 9; ++i) env.pull(0, 0);
  REQUIRE_FALSE(env.can_afford(10.0, 2));
  REQUIRE(env.can_afford(10.0, 0));
  EnvState env2(spec, 1);
  for (int i = 0; i < 8; ++i) env2.pull(0, 0);
  REQUIRE_THAT(env2.spent(), WithinRel(8.0, 1e-15));
  REQUIRE(env2.can_afford(9.2, 2));  // 8.0 + 1.2 <= 9.2 exactly
}

TEST_CASE("ledger invariants hold over a random pull sequence") {
  const InstanceSpec spec = oracles::load("k5_m3.json");
  EnvState env(spec, 31);
  mfmab::SplitMix64 actions(13);
  for (int i = 0; i < 2000; ++i)
    env.pull(static_cast<int>(actions.next() % 5),
             static_cast<int>(actions.next() % 3));
  double cost = 0.0;
  std::uint64_t per_cell = 0;
  for (const auto& rec : env.pull_log()) cost += spec.costs[rec.fidelity];
  for (int k = 0; k < 5; ++k)
    for (int m = 0; m < 3; ++m) per_cell += env.pulls(k, m);
  REQUIRE_THAT(env.spent(), WithinRel(cost, 1e-12));
  REQUIRE(per_cell == env.pull_log().size());
  REQUIRE(env.total_pulls() == 2000);
}

TEST_CASE("out-of-range pulls throw") {
  const InstanceSpec spec = oracles::load("k5_m3.json");
  EnvState env(spec, 1);
  REQUIRE_THROWS_AS(env.pull(5, 0), std::out_of_range);
  REQUIRE_THROWS_AS(env.pull(0, 3), std::out_of_range);
  REQUIRE_THROWS_AS(env.pull(-1, 0), std::out_of_range);
}
