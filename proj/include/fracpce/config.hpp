#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "fracpce/experiments.hpp"
#include "json.hpp"

namespace fracpce {

inline constexpr int kConfigSchemaVersion = 1;

/// Invalid configuration; `path()` names the offending field (e.g. "model.inputs[1].std").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Missing fields fall back to the defaults of the named model. With
/// require_model = false the "model" block may be omitted when "inputs" is given.
ExperimentConfig parse_experiment_config(const nlohmann::json& j, bool require_model = true);
ExperimentConfig load_experiment_config(const std::filesystem::path& path, bool require_model = true);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace fracpce
