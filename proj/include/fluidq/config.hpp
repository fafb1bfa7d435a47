#pragma once

#include <string>

#include <json.hpp>

#include "fluidq/levy_model.hpp"
#include "fluidq/mc.hpp"

namespace fluidq {

struct Tolerances {
  double z_max = 4.0;     // pass if |z| <= z_max ...
  double rel_max = 0.02;  // ... or relative error <= rel_max
  bool operator==(const Tolerances&) const = default;
};

struct OutputOptions {
  std::string dir = "out";
  bool dump_path = false;
  // Time horizon of the raw path dump (replication 0 only).
  double dump_limit = 50.0;
  bool operator==(const OutputOptions&) const = default;
};

struct ExperimentConfig {
  LevyModel model;
  SimConfig sim;
  Tolerances tol;
  OutputOptions outputs;
  std::string preset_name;

  bool operator==(const ExperimentConfig& o) const;
};

// Built-in configurations "example1" .. "example5"; throws
// std::invalid_argument for unknown names.
ExperimentConfig preset(const std::string& name);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Throws std::invalid_argument on malformed input.
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace fluidq
