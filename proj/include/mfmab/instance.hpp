#pragma once
// Multi-fidelity bandit instance.
//
// K arms, M fidelities. Pulling arm k at fidelity m costs lambda[m] and
// returns an observation in [0,1] with mean mu[k][m]. The top-fidelity mean
// mu[k][M-1] is the arm's true reward mean, and every lower fidelity is
// accurate up to a known error bound:  |mu[k][m] - mu[k][M-1]| <= zeta[m].
//
// A canonical instance has arms relabeled so the true means are descending
// with a unique best arm at index 0. Validation relabels rather than
// rejects; everything downstream (gaps, runners, bounds) expects canonical
// order.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfmab {

enum class Distribution { bernoulli, deterministic };

struct InstanceSpec {
  int num_arms = 0;
  int num_fidelities = 0;
  std::vector<double> costs;                // lambda, positive, non-decreasing
  std::vector<double> error_bounds;         // zeta, non-negative
  std::vector<std::vector<double>> means;   // means[arm][fidelity], in [0,1]
  Distribution distribution = Distribution::bernoulli;

  double mean(int arm, int fid) const { return means[arm][fid]; }
  double true_mean(int arm) const { return means[arm][num_fidelities - 1]; }
  double top_cost() const { return costs.back(); }
  double base_cost() const { return costs.front(); }

  bool operator==(const InstanceSpec&) const = default;
};

// Side inputs for the fidelity-selection procedures that need them: an upper
// bound proxy for the best arm's true mean and a lower bound proxy for the
// second-best arm's true mean.
struct PriorMeans {
  double mu1_tilde = 0.0;
  double mu2_tilde = 0.0;
};

inline void check_prior(const PriorMeans& prior) {
  if (!(prior.mu1_tilde > prior.mu2_tilde))
    throw std::invalid_argument("prior means require mu1_tilde > mu2_tilde");
}

struct Violation {
  enum class Kind {
    too_few_arms,
    no_unique_best,
    bad_cost,
    costs_not_sorted,
    bad_error_bound,
    bad_mean,
    inconsistent_mean,
  };
  Kind kind;
  int arm = -1;       // 0-based input-order arm index, -1 when n/a
  int fidelity = -1;  // 0-based fidelity index, -1 when n/a

  std::string describe() const {
    switch (kind) {
      case Kind::too_few_arms:
        return "no unique optimal arm requires K>=2";
      case Kind::no_unique_best:
        return "no unique optimal arm: top-fidelity means tie at the top "
               "(arm " + std::to_string(arm + 1) + ")";
      case Kind::bad_cost:
        return "cost at fidelity " + std::to_string(fidelity + 1) +
               " must be positive and finite";
      case Kind::costs_not_sorted:
        return "costs must be non-decreasing (violated at fidelity " +
               std::to_string(fidelity + 1) + ")";
      case Kind::bad_error_bound:
        return "error bound at fidelity " + std::to_string(fidelity + 1) +
               " must be non-negative and finite";
      case Kind::bad_mean:
        return "mean of arm " + std::to_string(arm + 1) + " at fidelity " +
               std::to_string(fidelity + 1) + " must lie in [0,1]";
      case Kind::inconsistent_mean:
        return "arm " + std::to_string(arm + 1) + ", fidelity " +
               std::to_string(fidelity + 1) +
               ": |mean - true mean| exceeds the error bound";
    }
    return "unknown violation";
  }
};

struct ValidationOutcome {
  InstanceSpec canonical;           // arms relabeled so true means descend
  std::vector<int> original_index;  // canonical arm k was input arm original_index[k]
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }

  // The runners tolerate mean-consistency violations (the algorithms execute
  // regardless; only the theoretical guarantees assume consistency). Any
  // other violation makes the instance unusable.
  bool runnable() const {
    for (const auto& v : violations)
      if (v.kind != Violation::Kind::inconsistent_mean) return false;
    return true;
  }
};

// Structural checks throw; everything else is reported in the outcome.
inline ValidationOutcome validate_instance(const InstanceSpec& spec) {
  const int K = spec.num_arms;
  const int M = spec.num_fidelities;
  if (K < 1 || M < 1)
    throw std::invalid_argument("instance needs at least one arm and one fidelity");
  if (static_cast<int>(spec.costs.size()) != M ||
      static_cast<int>(spec.error_bounds.size()) != M ||
      static_cast<int>(spec.means.size()) != K)
    throw std::invalid_argument("instance dimension mismatch");
  for (const auto& row : spec.means)
    if (static_cast<int>(row.size()) != M)
      throw std::invalid_argument("instance dimension mismatch in mean matrix");

  ValidationOutcome out;

  if (K < 2) out.violations.push_back({Violation::Kind::too_few_arms});

  for (int m = 0; m < M; ++m) {
    if (!(spec.costs[m] > 0.0) || !std::isfinite(spec.costs[m]))
      out.violations.push_back({Violation::Kind::bad_cost, -1, m});
    if (m > 0 && spec.costs[m] < spec.costs[m - 1])
      out.violations.push_back({Violation::Kind::costs_not_sorted, -1, m});
    if (!(spec.error_bounds[m] >= 0.0) || !std::isfinite(spec.error_bounds[m]))
      out.violations.push_back({Violation::Kind::bad_error_bound, -1, m});
  }
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m) {
      const double mu = spec.means[k][m];
      if (!std::isfinite(mu) || mu < 0.0 || mu > 1.0)
        out.violations.push_back({Violation::Kind::bad_mean, k, m});
    }

  // Consistency against the top-fidelity mean; per-arm, so input order is
  // fine. The slack absorbs decimal-literal rounding at exact boundaries.
  constexpr double kBoundarySlack = 1e-12;
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < M; ++m)
      if (std::abs(spec.means[k][m] - spec.means[k][M - 1]) >
          spec.error_bounds[m] + kBoundarySlack)
        out.violations.push_back({Violation::Kind::inconsistent_mean, k, m});

  // Canonicalize: stable sort by true mean, descending. Relabeling is the
  // repair for unsorted input, not a violation.
  std::vector<int> order(K);
  for (int k = 0; k < K; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return spec.means[a][M - 1] > spec.means[b][M - 1];
  });

  out.canonical = spec;
  for (int k = 0; k < K; ++k) out.canonical.means[k] = spec.means[order[k]];
  out.original_index = order;

  if (K >= 2 &&
      out.canonical.means[0][M - 1] == out.canonical.means[1][M - 1])
    out.violations.push_back({Violation::Kind::no_unique_best, order[1]});

  if (spec.error_bounds[M - 1] > 0.0)
    out.warnings.push_back(
        "error bound at the top fidelity is positive; the top-fidelity mean "
        "is then not exactly observable and several analytical quantities "
        "assume it is zero");

  return out;
}

}  // namespace mfmab
