// Command-line front end for the multi-fidelity bandit library.
//
// Subcommands:
//   validate --instance F
//   bounds   --instance F --delta D [--budget L --epsilon E
//                                    --mu1-tilde X --mu2-tilde Y]
//   bai      --instance F --procedure {a|b|c} --delta D --trials N --seed S
//            [--mu1-tilde X --mu2-tilde Y] --out PATH
//   regret   --instance F --budget L [--epsilon E] --trials N --seed S
//            --out PATH
//   sweep    --plan PLANFILE --out DIR
//
// Exit codes: 0 ok, 1 validation failure, 2 runtime error.
// MFMAB_LOG={quiet|error|warn|info|debug} controls stderr verbosity.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mfmab/bounds.hpp"
#include "mfmab/harness.hpp"
#include "mfmab/instance_io.hpp"
#include "mfmab/mfmab.hpp"

namespace {

enum class LogLevel { quiet = 0, error = 1, warn = 2, info = 3, debug = 4 };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("MFMAB_LOG");
    if (!env) return LogLevel::warn;
    const std::string v(env);
    if (v == "quiet") return LogLevel::quiet;
    if (v == "error") return LogLevel::error;
    if (v == "warn") return LogLevel::warn;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

void log_at(LogLevel lvl, const char* tag, const std::string& msg) {
  if (log_level() >= lvl) std::cerr << "[" << tag << "] " << msg << "\n";
}
void log_error(const std::string& m) { log_at(LogLevel::error, "error", m); }
void log_warn(const std::string& m) { log_at(LogLevel::warn, "warn", m); }
void log_info(const std::string& m) { log_at(LogLevel::info, "info", m); }

struct LoadedInstance {
  mfmab::ValidationOutcome outcome;
};

// Loads, validates, canonicalizes. Hard violations abort with exit code 1;
// consistency violations demote to warnings so the run can proceed.
LoadedInstance load_for_run(const std::string& path) {
  const mfmab::InstanceSpec raw = mfmab::load_instance(path);
  mfmab::ValidationOutcome outcome = mfmab::validate_instance(raw);
  if (!outcome.runnable()) {
    for (const auto& v : outcome.violations) log_error(path + ": " + v.describe());
    throw CLI::RuntimeError("instance failed validation", 1);
  }
  for (const auto& v : outcome.violations) log_warn(path + ": " + v.describe());
  for (const auto& w : outcome.warnings) log_warn(path + ": " + w);
  return {std::move(outcome)};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

int cmd_validate(const std::string& instance_path) {
  const mfmab::InstanceSpec raw = mfmab::load_instance(instance_path);
  const mfmab::ValidationOutcome outcome = mfmab::validate_instance(raw);
  for (const auto& v : outcome.violations)
    std::cout << "violation: " << v.describe() << "\n";
  for (const auto& w : outcome.warnings) std::cout << "warning: " << w << "\n";
  bool relabeled = false;
  for (std::size_t k = 0; k < outcome.original_index.size(); ++k)
    if (outcome.original_index[k] != static_cast<int>(k)) relabeled = true;
  if (relabeled) {
    std::cout << "canonical order (input labels):";
    for (int idx : outcome.original_index) std::cout << " " << idx + 1;
    std::cout << "\n";
  }
  if (!outcome.ok()) return 1;
  std::cout << "ok: " << outcome.canonical.num_arms << " arms, "
            << outcome.canonical.num_fidelities << " fidelities\n";
  return 0;
}

int cmd_bounds(const std::string& instance_path, double delta,
               std::optional<double> budget, std::optional<double> epsilon,
               std::optional<double> mu1, std::optional<double> mu2) {
  const LoadedInstance loaded = load_for_run(instance_path);
  const mfmab::InstanceSpec& spec = loaded.outcome.canonical;

  mfmab::PriorMeans prior;
  if (mu1 && mu2) {
    prior = {*mu1, *mu2};
  } else if (!mu1 && !mu2) {
    // Default to the instance's own top-two true means: the tight-prior case.
    prior = {spec.true_mean(0), spec.true_mean(1)};
    log_info("prior defaulted to the instance's top-two true means");
  } else {
    throw std::invalid_argument("--mu1-tilde and --mu2-tilde come as a pair");
  }

  const double L = 4.0 * spec.num_arms * spec.num_fidelities;
  const mfmab::BoundReport rep =
      mfmab::compute_bound_report(spec, prior, delta, L, budget, epsilon);

  std::ostringstream csv;
  csv << "quantity,value\n";
  auto row = [&csv](const std::string& name, double value) {
    csv << name << "," << mfmab::fmt_double(value) << "\n";
  };
  auto opt_row = [&csv](const std::string& name, const std::optional<double>& v) {
    csv << name << "," << (v ? mfmab::fmt_double(*v) : "") << "\n";
  };
  row("delta", rep.delta);
  row("mu1_tilde", rep.prior.mu1_tilde);
  row("mu2_tilde", rep.prior.mu2_tilde);
  row("H", rep.hardness.H);
  row("H_tilde", rep.hardness.H_tilde);
  row("G_tilde", rep.hardness.G_tilde);
  opt_row("H_dagger", rep.hardness.H_dagger);
  opt_row("Q", rep.hardness.Q);
  for (std::size_t k = 0; k < rep.hardness.m_star.size(); ++k) {
    row("m_star_arm" + std::to_string(k + 1), rep.hardness.m_star[k] + 1);
    row("m_tilde_star_arm" + std::to_string(k + 1), rep.hardness.m_tilde_star[k] + 1);
    const auto& md = rep.hardness.m_dagger[k];
    opt_row("m_dagger_arm" + std::to_string(k + 1),
            md ? std::optional<double>(*md + 1) : std::nullopt);
  }
  opt_row("bai_lb_kl", rep.bai_lb ? std::optional<double>(rep.bai_lb->kl_value)
                                  : std::nullopt);
  opt_row("bai_lb_simplified",
          rep.bai_lb ? std::optional<double>(rep.bai_lb->simplified) : std::nullopt);
  row("bai_ub_a_leading", rep.bai_ub.a_leading);
  row("bai_ub_a_loglog", rep.bai_ub.a_loglog);
  row("bai_ub_b", rep.bai_ub.b);
  opt_row("bai_ub_c_h_term", rep.bai_ub.c_h_term);
  opt_row("bai_ub_c_q_term", rep.bai_ub.c_q_term);
  row("assumption_arm2_ok", rep.assumption_arm2.holds ? 1.0 : 0.0);
  if (rep.regret) {
    row("budget", *rep.budget);
    row("epsilon", *rep.epsilon);
    row("regret_dep_lb_coeff", rep.regret->dep_lb_coeff);
    row("regret_dep_ub_coeff", rep.regret->dep_ub_coeff);
    row("regret_finite_dep_ub", rep.regret->finite_dep_ub);
    row("regret_indep_ub", rep.regret->indep_ub);
  }
  std::cout << csv.str();
  if (rep.bai_ub.a_loglog_clamped)
    log_warn("loglog term clamped to 0 (inner log <= 1)");
  if (rep.regret && rep.regret->log_clamped)
    log_warn("a regret-bound log argument was <= 1 and clamped to 0");
  if (!rep.assumption_arm2.holds) {
    std::string arms;
    for (int k : rep.assumption_arm2.violating_arms)
      arms += (arms.empty() ? "" : ", ") + std::to_string(k + 1);
    log_warn("second-best-dominance assumption fails for canonical arm(s): " + arms);
  }
  return 0;
}

int run_plan_to(const mfmab::ExperimentPlan& plan, const std::string& records_path,
                const std::string& summary_path_or_empty) {
  const LoadedInstance loaded = load_for_run(plan.instance_path);
  const mfmab::SweepResult result =
      mfmab::run_sweep(plan, loaded.outcome.canonical, loaded.outcome.original_index);
  write_file(records_path, mfmab::serialize_records(result.records));
  const std::string summary_csv = mfmab::serialize_summaries(result.summaries);
  if (summary_path_or_empty.empty())
    std::cout << summary_csv;
  else
    write_file(summary_path_or_empty, summary_csv);
  log_info("wrote " + std::to_string(result.records.size()) + " records to " +
           records_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-fidelity multi-armed bandit simulator"};
  app.require_subcommand(1);

  std::string instance_path, out_path, plan_path;
  double delta = 0.1, budget = 0.0;
  std::optional<double> epsilon, mu1, mu2;
  std::string procedure = "a";
  int trials = 1, workers = 0;
  std::uint64_t seed = 0, max_pulls = 10'000'000;
  double L = 0.0;
  bool timing = false;

  auto* validate = app.add_subcommand("validate", "validate an instance file");
  validate->add_option("--instance", instance_path, "instance JSON file")->required();

  auto* bounds = app.add_subcommand("bounds", "evaluate the analytical bounds");
  bounds->add_option("--instance", instance_path)->required();
  bounds->add_option("--delta", delta, "confidence parameter")->required();
  bounds->add_option("--budget", budget, "budget for the regret bounds");
  bounds->add_option("--epsilon", epsilon, "elimination depth parameter");
  bounds->add_option("--mu1-tilde", mu1, "upper proxy for the best true mean");
  bounds->add_option("--mu2-tilde", mu2, "lower proxy for the second-best true mean");

  auto* bai = app.add_subcommand("bai", "best-arm identification trials");
  bai->add_option("--instance", instance_path)->required();
  bai->add_option("--procedure", procedure, "fidelity selection: a, b or c")->required();
  bai->add_option("--delta", delta)->required();
  bai->add_option("--trials", trials)->required();
  bai->add_option("--seed", seed)->required();
  bai->add_option("--mu1-tilde", mu1);
  bai->add_option("--mu2-tilde", mu2);
  bai->add_option("--out", out_path, "records CSV path")->required();
  bai->add_option("--L", L, "confidence radius factor (default 4*K*M)");
  bai->add_option("--max-pulls", max_pulls);
  bai->add_option("--workers", workers, "worker threads (default: hardware)");
  bai->add_flag("--timing", timing, "record wall times (breaks byte-reproducibility)");

  auto* regret = app.add_subcommand("regret", "budgeted regret-minimization trials");
  regret->add_option("--instance", instance_path)->required();
  regret->add_option("--budget", budget)->required();
  regret->add_option("--epsilon", epsilon);
  regret->add_option("--trials", trials)->required();
  regret->add_option("--seed", seed)->required();
  regret->add_option("--out", out_path, "records CSV path")->required();
  regret->add_option("--workers", workers);
  regret->add_flag("--timing", timing);

  auto* sweep = app.add_subcommand("sweep", "run a plan file over its grid");
  sweep->add_option("--plan", plan_path, "plan JSON file")->required();
  sweep->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(instance_path);
    if (bounds->parsed())
      return cmd_bounds(instance_path, delta,
                        bounds->count("--budget") ? std::optional<double>(budget)
                                                  : std::nullopt,
                        epsilon, mu1, mu2);
    if (bai->parsed()) {
      mfmab::ExperimentPlan plan;
      plan.mode = mfmab::RunMode::bai;
      plan.instance_path = instance_path;
      plan.trials = trials;
      plan.master_seed = seed;
      plan.grid = {delta};
      plan.procedure = mfmab::parse_procedure(procedure);
      if (mu1 && mu2) plan.prior = mfmab::PriorMeans{*mu1, *mu2};
      if (plan.procedure != mfmab::ExploreProcedure::C && !plan.prior)
        throw std::invalid_argument(
            "procedures a and b need --mu1-tilde and --mu2-tilde");
      plan.confidence_factor = L;
      plan.max_pulls = max_pulls;
      plan.workers = workers;
      plan.timing = timing;
      return run_plan_to(plan, out_path, "");
    }
    if (regret->parsed()) {
      mfmab::ExperimentPlan plan;
      plan.mode = mfmab::RunMode::regret;
      plan.instance_path = instance_path;
      plan.trials = trials;
      plan.master_seed = seed;
      plan.grid = {budget};
      plan.epsilon = epsilon;
      plan.workers = workers;
      plan.timing = timing;
      return run_plan_to(plan, out_path, "");
    }
    if (sweep->parsed()) {
      std::ifstream in(plan_path);
      if (!in) throw std::runtime_error(plan_path + ": cannot open plan file");
      std::ostringstream buf;
      buf << in.rdbuf();
      const mfmab::ExperimentPlan plan = mfmab::parse_plan_json(buf.str(), plan_path);
      std::filesystem::create_directories(out_path);
      return run_plan_to(plan, out_path + "/records.csv", out_path + "/summary.csv");
    }
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const std::invalid_argument& e) {
    log_error(e.what());
    return 2;
  } catch (const std::exception& e) {
    log_error(e.what());
    return 2;
  }
  return 2;
}
