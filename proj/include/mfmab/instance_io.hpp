#pragma once
// JSON instance files:
//   {
//     "arms": 5, "fidelities": 3,
//     "costs": [1.0, 1.1, 1.2],
//     "error_bounds": [0.3, 0.15, 0.0],
//     "means": [[...], ...],          // means[arm][fidelity]
//     "distribution": "bernoulli"     // or "deterministic"
//   }
// The reader rejects non-finite and out-of-range values outright; softer
// model violations are the validator's job.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mfmab/instance.hpp"

namespace mfmab {

inline InstanceSpec parse_instance_json(const std::string& text,
                                        const std::string& origin = "<string>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  try {
    InstanceSpec spec;
    spec.num_arms = j.at("arms").get<int>();
    spec.num_fidelities = j.at("fidelities").get<int>();
    spec.costs = j.at("costs").get<std::vector<double>>();
    spec.error_bounds = j.at("error_bounds").get<std::vector<double>>();
    spec.means = j.at("means").get<std::vector<std::vector<double>>>();
    const std::string dist = j.value("distribution", "bernoulli");
    if (dist == "bernoulli")
      spec.distribution = Distribution::bernoulli;
    else if (dist == "deterministic")
      spec.distribution = Distribution::deterministic;
    else
      throw std::runtime_error("unknown distribution '" + dist + "'");

    if (spec.num_arms < 1 || spec.num_fidelities < 1 ||
        static_cast<int>(spec.costs.size()) != spec.num_fidelities ||
        static_cast<int>(spec.error_bounds.size()) != spec.num_fidelities ||
        static_cast<int>(spec.means.size()) != spec.num_arms)
      throw std::runtime_error("dimension mismatch");
    for (const auto& row : spec.means)
      if (static_cast<int>(row.size()) != spec.num_fidelities)
        throw std::runtime_error("dimension mismatch in mean matrix");
    for (double c : spec.costs)
      if (!std::isfinite(c) || c <= 0.0)
        throw std::runtime_error("costs must be positive finite numbers");
    for (double z : spec.error_bounds)
      if (!std::isfinite(z) || z < 0.0)
        throw std::runtime_error("error bounds must be non-negative finite numbers");
    for (const auto& row : spec.means)
      for (double mu : row)
        if (!std::isfinite(mu) || mu < 0.0 || mu > 1.0)
          throw std::runtime_error("means must lie in [0,1]");
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
}

inline InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open instance file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_json(buf.str(), path);
}

}  // namespace mfmab
