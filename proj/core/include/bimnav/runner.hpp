#pragma once

#include <filesystem>
#include <vector>

#include "bimnav/scenario.hpp"
#include "bimnav/stack.hpp"

namespace bimnav
{

struct ScenarioResult
{
  std::vector<MissionRecord> missions;
  bool success{false};
};

/// Runs the warm-up and every mission of `scenario` headless. Writes into
/// `out_dir` (created if needed): telemetry.jsonl, missions.json,
/// ranging.jsonl, uwb_report.json, map.pgm and map.json.
ScenarioResult run_scenario(const Scenario & scenario, const std::filesystem::path & out_dir);

}  // namespace bimnav
