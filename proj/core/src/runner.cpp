#include "bimnav/runner.hpp"

#include <fstream>

#include "bimnav/error.hpp"
#include "bimnav/serialization.hpp"

namespace bimnav
{

namespace
{

std::ofstream open_out(const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write '" + path.string() + "'");
  }
  return out;
}

}  // namespace

ScenarioResult run_scenario(const Scenario & scenario, const std::filesystem::path & out_dir)
{
  std::filesystem::create_directories(out_dir);
  NavigationStack stack(scenario);
  std::ofstream telemetry = open_out(out_dir / "telemetry.jsonl");
  auto sink = [&](const TelemetryEvent & e) {telemetry << to_json(e).dump() << '\n';};

  stack.begin_localization(scenario.config.warmup_ticks);
  while (stack.busy()) {
    sink(stack.tick());
  }

  ScenarioResult result;
  result.success = true;
  for (const auto & goal : scenario.missions) {
    MissionRecord rec = stack.run_mission(goal, sink);
    result.success = result.success && rec.arrived;
    result.missions.push_back(std::move(rec));
    if (!result.success) {
      break;
    }
  }
  telemetry.close();

  nlohmann::json missions = nlohmann::json::array();
  for (const auto & m : result.missions) {
    missions.push_back(to_json(m));
  }
  open_out(out_dir / "missions.json") << nlohmann::json{{"success", result.success}, {"missions", missions}}.dump(2)
                                      << '\n';

  std::ofstream ranging = open_out(out_dir / "ranging.jsonl");
  for (const auto & o : stack.ranging_log()) {
    ranging << uwb::to_json(o).dump() << '\n';
  }
  std::map<std::string, double> heights;
  std::map<std::string, Point3> truth;
  for (const auto & a : scenario.anchors) {
    heights[a.id] = a.position.z;
    truth[a.id] = a.position;
  }
  open_out(out_dir / "uwb_report.json")
    << uwb::locate_report(stack.ranging_log(), heights, uwb::kDefaultTagHeight, &truth).dump(2) << '\n';

  open_out(out_dir / "map.pgm") << to_pgm(stack.belief());
  open_out(out_dir / "map.json") << grid_sidecar(stack.belief()).dump() << '\n';
  return result;
}

}  // namespace bimnav
