#pragma once
// Registry of the named experiments.  Each one returns a table of records;
// parameters not given in the config take the defaults listed by
// experiment_defaults().

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "halfplane/harness.hpp"

namespace hpq {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  long replicas = 0;  // 0: the experiment's default
  int threads = 1;
  nlohmann::json params = nlohmann::json::object();
};

const std::vector<std::string>& experiment_names();

// Default parameters, including "replicas".  Throws std::invalid_argument for
// unknown names.
nlohmann::json experiment_defaults(std::string_view name);

// Throws std::invalid_argument for an unknown experiment, an unknown
// parameter or a parameter of the wrong shape.
std::vector<ExperimentRecord> run_experiment(std::string_view name, const ExperimentConfig& config);

// First record whose quantity matches and whose params contain `match`.
const ExperimentRecord* find_record(const std::vector<ExperimentRecord>& records, std::string_view quantity,
                                    const nlohmann::json& match = nlohmann::json::object());

}  // namespace hpq
