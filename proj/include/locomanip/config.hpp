#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "locomanip/contact_sim.hpp"
#include "locomanip/governor.hpp"
#include "locomanip/planner.hpp"

namespace locomanip {

// Everything a config file may set. Missing sections keep their defaults.
struct ToolkitConfig {
  PlanConfig plan;
  SolveOptions solver;
  EnergyModel energy;
  AdmittanceGains gains;
  AxisBounds bounds;
};

ToolkitConfig load_config(std::string_view document);
std::string save_config(const ToolkitConfig& config);

// A contact scenario plus the grid used to build its admissible set.
struct ScenarioFile {
  Scenario scenario;
  GridSpec grid;
  // Governor membership tolerance; nullopt means default_tolerance(grid).
  std::optional<double> tol;
};

ScenarioFile load_scenario(std::string_view document);
std::string save_scenario(const ScenarioFile& file);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace locomanip
