#pragma once
// Experiment orchestration: Monte-Carlo sweeps over a delta grid (best-arm
// identification) or a budget grid (regret minimization), a bounded worker
// pool, per-grid-point summaries, and the log-log scaling fit.
//
// Reproducibility contract: trial i at grid point g runs with the seed
// trial_seed(master_seed, g, i), and records are aggregated in trial order,
// so the output is identical for any worker count. Wall-clock times are kept
// in memory but only written to CSV when explicitly requested, since timing
// is the one field that cannot reproduce byte-for-byte.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mfmab/bai.hpp"
#include "mfmab/csv.hpp"
#include "mfmab/instance.hpp"
#include "mfmab/regret.hpp"
#include "mfmab/rng.hpp"

namespace mfmab {

inline std::string_view to_string(ExploreProcedure p) {
  switch (p) {
    case ExploreProcedure::A: return "a";
    case ExploreProcedure::B: return "b";
    case ExploreProcedure::C: return "c";
  }
  return "?";
}

inline ExploreProcedure parse_procedure(std::string_view s) {
  if (s == "a" || s == "A") return ExploreProcedure::A;
  if (s == "b" || s == "B") return ExploreProcedure::B;
  if (s == "c" || s == "C") return ExploreProcedure::C;
  throw std::invalid_argument("procedure must be one of a, b, c");
}

struct ExperimentPlan {
  RunMode mode = RunMode::bai;
  std::string instance_path;
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::vector<double> grid;     // delta grid (bai) or budget grid (regret)
  ExploreProcedure procedure = ExploreProcedure::A;
  std::optional<PriorMeans> prior;
  std::optional<double> epsilon;       // regret only
  double confidence_factor = 0.0;      // 0 selects 4*K*M
  std::uint64_t max_pulls = 10'000'000;
  int workers = 0;  // 0 selects the hardware concurrency
  bool timing = false;

  std::string grid_name() const {
    return mode == RunMode::regret ? "budget" : "delta";
  }
};

inline void validate_plan(const ExperimentPlan& plan) {
  if (plan.mode != RunMode::bai && plan.mode != RunMode::regret)
    throw std::invalid_argument("sweeps support the bai and regret modes");
  if (plan.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (plan.grid.empty()) throw std::invalid_argument("grid must be non-empty");
  for (double v : plan.grid)
    if (!(v > 0.0)) throw std::invalid_argument("grid values must be positive");
}

// Runs fn(0..n-1) on up to `workers` threads. The first exception wins and
// is rethrown after all workers drain.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto body = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min(workers, n);
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline SummaryRecord summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("cannot summarize zero records");
  SummaryRecord s;
  s.mode = records.front().mode;
  s.procedure = records.front().procedure;
  s.grid_param_name = records.front().grid_param_name;
  s.grid_param_value = records.front().grid_param_value;
  s.trials = static_cast<int>(records.size());

  const double n = static_cast<double>(records.size());
  auto mean_sd = [&](auto&& get) -> std::pair<double, double> {
    double mean = 0.0;
    for (const auto& r : records) mean += get(r);
    mean /= n;
    double ss = 0.0;
    for (const auto& r : records) {
      const double d = get(r) - mean;
      ss += d * d;
    }
    const double sd = records.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, sd};
  };

  auto [cm, cs] = mean_sd([](const TrialRecord& r) { return r.total_cost; });
  s.cost_mean = cm;
  s.cost_stddev = cs;
  if (records.front().success) {
    int wins = 0;
    for (const auto& r : records) wins += r.success.value_or(false) ? 1 : 0;
    s.success_rate = wins / n;
  }
  if (records.front().pseudo_regret) {
    auto [rm, rs] =
        mean_sd([](const TrialRecord& r) { return r.pseudo_regret.value_or(0.0); });
    s.regret_mean = rm;
    s.regret_stddev = rs;
  }
  return s;
}

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<SummaryRecord> summaries;  // one per grid point
};

// Runs the plan against a canonical instance. original_index maps canonical
// arm indices back to the labels of the input file (records report those).
inline SweepResult run_sweep(const ExperimentPlan& plan, const InstanceSpec& spec,
                             const std::vector<int>& original_index) {
  validate_plan(plan);
  const int workers = plan.workers > 0
                          ? plan.workers
                          : static_cast<int>(std::thread::hardware_concurrency());

  SweepResult out;
  for (std::size_t g = 0; g < plan.grid.size(); ++g) {
    const double grid_value = plan.grid[g];
    std::vector<TrialRecord> records(plan.trials);
    parallel_for(plan.trials, workers, [&, g](int i) {
      const std::uint64_t seed = trial_seed(plan.master_seed, g, i);
      TrialRecord rec;
      rec.mode = plan.mode;
      rec.grid_param_name = plan.grid_name();
      rec.grid_param_value = grid_value;
      rec.trial = i;
      rec.seed = seed;
      const auto start = std::chrono::steady_clock::now();
      if (plan.mode == RunMode::bai) {
        BaiConfig cfg;
        cfg.delta = grid_value;
        cfg.confidence_factor = plan.confidence_factor;
        cfg.procedure = plan.procedure;
        cfg.prior = plan.prior;
        cfg.max_pulls = plan.max_pulls;
        rec.procedure = std::string(to_string(plan.procedure));
        const BaiResult r = run_bai(spec, cfg, seed);
        rec.chosen_arm = original_index[r.chosen_arm] + 1;
        rec.success = r.chosen_arm == 0;
        rec.total_cost = r.total_cost;
        rec.rounds = r.rounds;
      } else {
        RegretConfig cfg;
        cfg.budget = grid_value;
        cfg.epsilon = plan.epsilon;
        const RegretResult r = run_regret(spec, cfg, seed);
        rec.pseudo_regret = r.pseudo_regret;
        rec.total_cost = r.total_cost;
        rec.rounds = r.total_pulls;
      }
      if (plan.timing) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        rec.wall_ms =
            std::chrono::duration<double, std::milli>(elapsed).count();
      }
      records[i] = std::move(rec);
    });
    out.summaries.push_back(summarize(records));
    for (auto& r : records) out.records.push_back(std::move(r));
  }
  return out;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  std::vector<double> excluded;  // grid values dropped for non-positive means
};

// Ordinary least squares of log(mean regret) against log(budget).
inline SlopeFit fit_scaling_slope(
    const std::vector<std::pair<double, double>>& budget_and_mean_regret) {
  SlopeFit fit;
  std::vector<double> xs, ys;
  for (const auto& [budget, mean] : budget_and_mean_regret) {
    if (!(mean > 0.0)) {
      fit.excluded.push_back(budget);
      continue;
    }
    xs.push_back(std::log(budget));
    ys.push_back(std::log(mean));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3)
    throw std::domain_error("scaling fit needs at least 3 grid points with "
                            "positive mean regret");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points_used = n;
  return fit;
}

// Plan files share the instance files' JSON format:
//   { "mode": "bai", "instance": "path.json", "procedure": "a",
//     "delta_grid": [0.05, 0.1], "trials": 100, "seed": 7,
//     "mu1_tilde": 0.95, "mu2_tilde": 0.75, "workers": 4 }
// Regret plans use "budget_grid" and optionally "epsilon".
inline ExperimentPlan parse_plan_json(const std::string& text,
                                      const std::string& origin = "<string>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  try {
    ExperimentPlan plan;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "bai")
      plan.mode = RunMode::bai;
    else if (mode == "regret")
      plan.mode = RunMode::regret;
    else
      throw std::runtime_error("plan mode must be 'bai' or 'regret'");
    plan.instance_path = j.at("instance").get<std::string>();
    plan.trials = j.at("trials").get<int>();
    plan.master_seed = j.at("seed").get<std::uint64_t>();
    if (plan.mode == RunMode::bai) {
      plan.grid = j.at("delta_grid").get<std::vector<double>>();
      plan.procedure = parse_procedure(j.at("procedure").get<std::string>());
      if (j.contains("mu1_tilde") || j.contains("mu2_tilde"))
        plan.prior = PriorMeans{j.at("mu1_tilde").get<double>(),
                                j.at("mu2_tilde").get<double>()};
      if (j.contains("L")) plan.confidence_factor = j.at("L").get<double>();
      if (j.contains("max_pulls"))
        plan.max_pulls = j.at("max_pulls").get<std::uint64_t>();
    } else {
      plan.grid = j.at("budget_grid").get<std::vector<double>>();
      if (j.contains("epsilon")) plan.epsilon = j.at("epsilon").get<double>();
    }
    if (j.contains("workers")) plan.workers = j.at("workers").get<int>();
    if (j.contains("timing")) plan.timing = j.at("timing").get<bool>();
    validate_plan(plan);
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
}

}  // namespace mfmab
