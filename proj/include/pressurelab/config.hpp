#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pressurelab/error.hpp"
#include "pressurelab/subset.hpp"
#include "pressurelab/symbolic.hpp"

namespace pressurelab {

/// Parsed and validated experiment description.
struct ExperimentConfig {
  Subshift system = Subshift::full(2);
  LocallyConstantPotential potential = LocallyConstantPotential::zero(Subshift::full(2));
  SubsetSpec subset;
  std::vector<int> scales{1};
  NRange n_range{4, 24};
  int N = 4;
  int L = 16;
  double tol = 1e-4;
  std::uint64_t seed = 0;
  nlohmann::json options = nlohmann::json::object();
  nlohmann::json source;  // the document as given, echoed into reports
};

/// Parses JSON text. Throws SchemaError listing every violation with its path,
/// or InadmissibleWord for potential keys outside the language.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_json(const nlohmann::json& doc);

/// Command-specific rules (e.g. m >= 1 for separated sets, L >= N + m for covers).
void validate_for(const ExperimentConfig& config, const std::string& command,
                  const std::string& subcommand);

/// Reads an option with a default; a type mismatch is a schema violation.
template <class T>
T option_or(const ExperimentConfig& config, const std::string& key, T fallback) {
  if (!config.options.contains(key)) return fallback;
  try {
    return config.options.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError({"options." + key + ": wrong type"});
  }
}

SubsetSpec parse_subset(const nlohmann::json& node, int alphabet_size, const std::string& path,
                        std::vector<std::string>& violations);
TransitionRelation parse_relation(const nlohmann::json& node, int alphabet_size,
                                  const std::string& path, std::vector<std::string>& violations);

}  // namespace pressurelab
