#pragma once
// Result records and their CSV serialization.
//
// One row per trial, one schema for both tasks (missing fields stay empty):
//   mode,procedure,grid_param_name,grid_param_value,trial,seed,
//   chosen_arm,success,total_cost,rounds,pseudo_regret,wall_ms
//
// Doubles are written in shortest round-trip form, so parse(serialize(x))
// reproduces x exactly and equal runs produce byte-identical files.

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace mfmab {

enum class RunMode { bai, regret, bounds, validate };

inline std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::bai: return "bai";
    case RunMode::regret: return "regret";
    case RunMode::bounds: return "bounds";
    case RunMode::validate: return "validate";
  }
  return "?";
}

inline std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

struct TrialRecord {
  RunMode mode = RunMode::bai;
  std::string procedure;        // "a" | "b" | "c", empty for regret
  std::string grid_param_name;  // "delta" | "budget"
  double grid_param_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<int> chosen_arm;  // 1-based label in the input instance order
  std::optional<bool> success;
  double total_cost = 0.0;
  std::uint64_t rounds = 0;
  std::optional<double> pseudo_regret;
  std::optional<double> wall_ms;

  bool operator==(const TrialRecord&) const = default;
};

struct SummaryRecord {
  RunMode mode = RunMode::bai;
  std::string procedure;
  std::string grid_param_name;
  double grid_param_value = 0.0;
  int trials = 0;
  std::optional<double> success_rate;
  std::optional<double> cost_mean;
  std::optional<double> cost_stddev;  // sample (n-1) deviation
  std::optional<double> regret_mean;
  std::optional<double> regret_stddev;
};

inline constexpr std::string_view kRecordHeader =
    "mode,procedure,grid_param_name,grid_param_value,trial,seed,chosen_arm,"
    "success,total_cost,rounds,pseudo_regret,wall_ms";

inline constexpr std::string_view kSummaryHeader =
    "mode,procedure,grid_param_name,grid_param_value,trials,success_rate,"
    "cost_mean,cost_stddev,regret_mean,regret_stddev";

namespace detail {

template <typename T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>)
    return *v ? "1" : "0";
  else if constexpr (std::is_same_v<T, double>)
    return fmt_double(*v);
  else
    return std::to_string(*v);
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("bad numeric field: '" + std::string(s) + "'");
  return value;
}

inline RunMode parse_mode(std::string_view s) {
  if (s == "bai") return RunMode::bai;
  if (s == "regret") return RunMode::regret;
  if (s == "bounds") return RunMode::bounds;
  if (s == "validate") return RunMode::validate;
  throw std::runtime_error("bad mode field: '" + std::string(s) + "'");
}

}  // namespace detail

inline std::string serialize_records(const std::vector<TrialRecord>& records) {
  std::string out{kRecordHeader};
  out += '\n';
  for (const auto& r : records) {
    out += to_string(r.mode);
    out += ',';
    out += r.procedure;
    out += ',';
    out += r.grid_param_name;
    out += ',';
    out += fmt_double(r.grid_param_value);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += detail::opt_str(r.chosen_arm);
    out += ',';
    out += detail::opt_str(r.success);
    out += ',';
    out += fmt_double(r.total_cost);
    out += ',';
    out += std::to_string(r.rounds);
    out += ',';
    out += detail::opt_str(r.pseudo_regret);
    out += ',';
    out += detail::opt_str(r.wall_ms);
    out += '\n';
  }
  return out;
}

inline std::vector<TrialRecord> parse_records(std::string_view csv) {
  std::vector<TrialRecord> records;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    const std::string_view line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kRecordHeader)
        throw std::runtime_error("unexpected record header: '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 12)
      throw std::runtime_error("record row has " + std::to_string(f.size()) +
                               " fields, expected 12");
    TrialRecord r;
    r.mode = detail::parse_mode(f[0]);
    r.procedure = std::string(f[1]);
    r.grid_param_name = std::string(f[2]);
    r.grid_param_value = detail::parse_number<double>(f[3]);
    r.trial = detail::parse_number<int>(f[4]);
    r.seed = detail::parse_number<std::uint64_t>(f[5]);
    if (!f[6].empty()) r.chosen_arm = detail::parse_number<int>(f[6]);
    if (!f[7].empty()) r.success = f[7] == "1";
    r.total_cost = detail::parse_number<double>(f[8]);
    r.rounds = detail::parse_number<std::uint64_t>(f[9]);
    if (!f[10].empty()) r.pseudo_regret = detail::parse_number<double>(f[10]);
    if (!f[11].empty()) r.wall_ms = detail::parse_number<double>(f[11]);
    records.push_back(std::move(r));
  }
  return records;
}

inline std::string serialize_summaries(const std::vector<SummaryRecord>& summaries) {
  std::string out{kSummaryHeader};
  out += '\n';
  for (const auto& s : summaries) {
    out += to_string(s.mode);
    out += ',';
    out += s.procedure;
    out += ',';
    out += s.grid_param_name;
    out += ',';
    out += fmt_double(s.grid_param_value);
    out += ',';
    out += std::to_string(s.trials);
    out += ',';
    out += detail::opt_str(s.success_rate);
    out += ',';
    out += detail::opt_str(s.cost_mean);
    out += ',';
    out += detail::opt_str(s.cost_stddev);
    out += ',';
    out += detail::opt_str(s.regret_mean);
    out += ',';
    out += detail::opt_str(s.regret_stddev);
    out += '\n';
  }
  return out;
}

}  // namespace mfmab
