#include <catch2/catch_amalgamated.hpp>

#include "mfmab/instance.hpp"
#include "mfmab/instance_io.hpp"
#include "oracles.hpp"

using mfmab::Distribution;
using mfmab::InstanceSpec;
using mfmab::validate_instance;
using mfmab::Violation;

namespace {

bool has_violation(const mfmab::ValidationOutcome& out, Violation::Kind kind,
                   int arm = -1, int fid = -1) {
  for (const auto& v : out.violations)
    if (v.kind == kind && v.arm == arm && v.fidelity == fid) return true;
  return false;
}

}  // namespace

TEST_CASE("bundled k5_m3 instance validates cleanly") {
  const InstanceSpec spec = oracles::load("k5_m3.json");
  const auto out = validate_instance(spec);
  REQUIRE(out.ok());
  REQUIRE(out.runnable());
  REQUIRE(out.warnings.empty());
  // Already in canonical order.
  for (int k = 0; k < spec.num_arms; ++k) REQUIRE(out.original_index[k] == k);
  REQUIRE(out.canonical == spec);
  // Spot check of the consistency inequality the validator enforces.
  REQUIRE(std::abs(spec.mean(0, 0) - spec.mean(0, 2)) <= spec.error_bounds[0]);
}

TEST_CASE("a single arm cannot have a unique best") {
  InstanceSpec spec;
  spec.num_arms = 1;
  spec.num_fidelities = 1;
  spec.costs = {1.0};
  spec.error_bounds = {0.0};
  spec.means = {{0.5}};
  const auto out = validate_instance(spec);
  REQUIRE_FALSE(out.ok());
  REQUIRE(has_violation(out, Violation::Kind::too_few_arms));
  REQUIRE(out.violations.front().describe() ==
          "no unique optimal arm requires K>=2");
}

TEST_CASE("tightening an error bound below the mean spread is a violation") {
  InstanceSpec spec = oracles::load("k5_m3.json");
  spec.error_bounds[0] = 0.10;  // |0.70 - 0.90| = 0.20 > 0.10 for arm 1
  const auto out = validate_instance(spec);
  REQUIRE_FALSE(out.ok());
  REQUIRE(out.runnable());  // consistency violations alone do not block runs
  REQUIRE(has_violation(out, Violation::Kind::inconsistent_mean, 0, 0));
}

TEST_CASE("arms are relabeled into descending true-mean order") {
  InstanceSpec spec = oracles::load("k5_m3.json");
  std::swap(spec.means[0], spec.means[3]);  // true means now 0.6, .., 0.9, ..
  const auto out = validate_instance(spec);
  REQUIRE(out.ok());
  REQUIRE(out.original_index == std::vector<int>{3, 1, 2, 0, 4});
  REQUIRE(out.canonical.means[0][2] == 0.90);
  for (int k = 0; k + 1 < out.canonical.num_arms; ++k)
    REQUIRE(out.canonical.true_mean(k) >= out.canonical.true_mean(k + 1));
}

TEST_CASE("canonicalization is idempotent") {
  mfmab::SplitMix64 rng(11);
  for (int i = 0; i < 50; ++i) {
    InstanceSpec spec = oracles::random_instance(rng);
    // Shuffle arms to exercise the relabeling.
    for (int k = spec.num_arms - 1; k > 0; --k)
      std::swap(spec.means[k], spec.means[rng.next() % (k + 1)]);
    const auto once = validate_instance(spec);
    const auto twice = validate_instance(once.canonical);
    REQUIRE(twice.canonical == once.canonical);
    for (std::size_t k = 0; k < twice.original_index.size(); ++k)
      REQUIRE(twice.original_index[k] == static_cast<int>(k));
  }
}

TEST_CASE("a tie at the top is reported") {
  InstanceSpec spec;
  spec.num_arms = 2;
  spec.num_fidelities = 1;
  spec.costs = {1.0};
  spec.error_bounds = {0.0};
  spec.means = {{0.7}, {0.7}};
  const auto out = validate_instance(spec);
  REQUIRE_FALSE(out.ok());
  REQUIRE(has_violation(out, Violation::Kind::no_unique_best, 1));
}

TEST_CASE("structural problems throw instead of reporting") {
  InstanceSpec spec = oracles::load("k5_m3.json");
  spec.means.pop_back();
  REQUIRE_THROWS_AS(validate_instance(spec), std::invalid_argument);
}

TEST_CASE("a positive top error bound only warns") {
  InstanceSpec spec = oracles::load("k5_m3.json");
  spec.error_bounds[2] = 0.01;
  const auto out = validate_instance(spec);
  REQUIRE(out.ok());
  REQUIRE(out.warnings.size() == 1);
}

TEST_CASE("bundled k5_m5 instance has two known inconsistent cells") {
  const InstanceSpec spec = oracles::load("k5_m5.json");
  const auto out = validate_instance(spec);
  REQUIRE_FALSE(out.ok());
  REQUIRE(out.runnable());
  REQUIRE(out.violations.size() == 2);
  REQUIRE(has_violation(out, Violation::Kind::inconsistent_mean, 0, 3));
  REQUIRE(has_violation(out, Violation::Kind::inconsistent_mean, 2, 3));
}

TEST_CASE("instance reader rejects malformed input") {
  using mfmab::parse_instance_json;
  REQUIRE_THROWS_WITH(parse_instance_json("{", "broken.json"),
                      Catch::Matchers::ContainsSubstring("broken.json"));
  REQUIRE_THROWS_AS(
      parse_instance_json(R"({"arms":1,"fidelities":1,"costs":[1.0],
        "error_bounds":[0.0],"means":[[1.5]]})"),
      std::runtime_error);
  REQUIRE_THROWS_AS(
      parse_instance_json(R"({"arms":1,"fidelities":1,"costs":[-1.0],
        "error_bounds":[0.0],"means":[[0.5]]})"),
      std::runtime_error);
  REQUIRE_THROWS_AS(
      parse_instance_json(R"({"arms":2,"fidelities":1,"costs":[1.0],
        "error_bounds":[0.0],"means":[[0.5]]})"),
      std::runtime_error);
  REQUIRE_THROWS_AS(
      parse_instance_json(R"({"arms":1,"fidelities":1,"costs":[1.0],
        "error_bounds":[0.0],"means":[[0.5]],"distribution":"gaussian"})"),
      std::runtime_error);
  REQUIRE_THROWS_AS(mfmab::load_instance("/nonexistent/file.json"),
                    std::runtime_error);
}
