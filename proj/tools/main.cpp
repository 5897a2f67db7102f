#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bimnav/error.hpp"
#include "bimnav/runner.hpp"
#include "bimnav/semantic_planner.hpp"
#include "bimnav/serialization.hpp"
#include "service.hpp"

namespace fs = std::filesystem;
using namespace bimnav;

namespace
{

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path & path, const std::string & data)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << data)) {
    throw Error("cannot write '" + path.string() + "'");
  }
}

std::string env_or(const char * name, const std::string & fallback)
{
  const char * v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

int run_scenario_cmd(const fs::path & scenario_path, std::optional<std::uint64_t> seed, const fs::path & out)
{
  Scenario scenario = load_scenario_file(scenario_path);
  if (seed) {
    scenario.seed = *seed;
  }
  const ScenarioResult result = run_scenario(scenario, out);
  for (const auto & m : result.missions) {
    std::cout << m.start << " -> " << m.goal << ": ";
    for (std::size_t i = 0; i < m.semantic.semantic_path.size(); i += 2) {
      std::cout << (i ? " > " : "") << m.semantic.semantic_path[i];
    }
    std::cout << " (weight " << m.semantic.total_weight << ", " << (m.arrived ? "arrived" : "not arrived")
              << " after " << m.duration << " s)\n";
    for (const auto & w : m.semantic.warnings) {
      std::cout << "  warning: " << w.room_id << " " << w.reason << " (" << w.weight << ")\n";
    }
  }
  std::cout << "logs written to " << out.string() << "\n";
  return result.success ? 0 : 1;
}

int locate_cmd(
  const fs::path & log_path, const std::optional<fs::path> & building_path,
  const std::optional<fs::path> & truth_path, double anchor_height, const std::optional<fs::path> & out)
{
  const auto log = uwb::parse_ranging_log(read_file(log_path));
  std::map<std::string, double> heights;
  std::map<std::string, Point3> truth;
  if (truth_path) {
    const auto doc = nlohmann::json::parse(read_file(*truth_path));
    for (const auto & a : doc.at("anchors")) {
      const auto & p = a.at("position");
      const std::string id = a.at("id").is_string() ? a.at("id").get<std::string>() : a.at("id").dump();
      truth[id] = {p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>()};
      heights[id] = truth[id].z;
    }
  }
  nlohmann::json report = uwb::locate_report(log, heights, anchor_height, truth_path ? &truth : nullptr);
  if (building_path) {
    const BuildingGraph building = load_building_file(*building_path);
    for (auto & a : report["anchors"]) {
      if (a.contains("position")) {
        const Point2 p{a["position"][0].get<double>(), a["position"][1].get<double>()};
        const auto room = building.room_at(p);
        a["room"] = room ? nlohmann::json(*room) : nlohmann::json();
      }
    }
  }
  const std::string text = report.dump(2) + "\n";
  if (out) {
    write_file(*out, text);
  } else {
    std::cout << text;
  }
  bool any_failed = false;
  for (const auto & a : report["anchors"]) {
    any_failed = any_failed || a.contains("failure");
  }
  return any_failed ? 1 : 0;
}

Scenario scenario_for_service(const std::string & scenario_path, const std::string & building_path)
{
  if (!scenario_path.empty()) {
    return load_scenario_file(scenario_path);
  }
  if (building_path.empty()) {
    throw InvalidArgument("serve needs --scenario or --building");
  }
  Scenario s;
  s.building_path = building_path;
  s.building = load_building_file(building_path);
  s.start_time = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const RoomNode & first = s.building.rooms().begin()->second;
  s.initial_pose = Pose2D(first.center.x, first.center.y, 0.0);
  return s;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Semantic navigation stack: planning, simulation, UWB anchor localization"};
  app.require_subcommand(1);

  auto * run = app.add_subcommand("run-scenario", "Run a scenario headless and write logs");
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  run->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();

  auto * locate = app.add_subcommand("locate-anchors", "Localize UWB anchors from a ranging log");
  std::string log_path;
  std::optional<std::string> building_path;
  std::optional<std::string> truth_path;
  std::optional<std::string> report_path;
  double anchor_height = uwb::kDefaultTagHeight;
  locate->add_option("log", log_path, "Ranging log (JSON lines)")->required()->check(CLI::ExistingFile);
  locate->add_option("building", building_path, "Building JSON; estimates are tagged with their room")
  ->check(CLI::ExistingFile);
  locate->add_option("--ground-truth", truth_path, "JSON {anchors:[{id, position:{x,y,z}}]}")
  ->check(CLI::ExistingFile);
  locate->add_option("--anchor-height", anchor_height, "Anchor height when no ground truth gives it")
  ->capture_default_str();
  locate->add_option("--out", report_path, "Write the report here instead of stdout");

  auto * serve = app.add_subcommand("serve", "Serve the stack over HTTP for the operator console");
  std::string serve_scenario = env_or("BIMNAV_SCENARIO", "");
  std::string serve_building = env_or("BIMNAV_BUILDING", "");
  std::string host = env_or("BIMNAV_HOST", "127.0.0.1");
  int port = std::atoi(env_or("BIMNAV_PORT", "8080").c_str());
  std::optional<std::uint64_t> serve_seed;
  double time_scale = 1.0;
  serve->add_option("--scenario", serve_scenario, "Scenario JSON (env BIMNAV_SCENARIO)");
  serve->add_option("--building", serve_building, "Building JSON when no scenario is given (env BIMNAV_BUILDING)");
  serve->add_option("--host", host, "Bind address (env BIMNAV_HOST)")->capture_default_str();
  serve->add_option("--port", port, "Port (env BIMNAV_PORT)")->capture_default_str();
  serve->add_option("--seed", serve_seed, "Override the scenario seed (env BIMNAV_SEED)");
  serve->add_option("--time-scale", time_scale, "Simulated seconds per second, 0 = as fast as possible")
  ->capture_default_str();

  auto * plan_cmd = app.add_subcommand("plan", "Print the semantic path between two rooms");
  std::string plan_building;
  std::string from;
  std::string to;
  std::optional<std::string> weights_path;
  std::optional<std::string> at;
  plan_cmd->add_option("building", plan_building, "Building JSON")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("start", from, "Start room id")->required();
  plan_cmd->add_option("goal", to, "Goal room id")->required();
  plan_cmd->add_option("--weights", weights_path, "Weight overrides JSON")->check(CLI::ExistingFile);
  plan_cmd->add_option("--now", at, "ISO-8601 time for scan ages (default: current time)");

  auto * export_cmd = app.add_subcommand("export-grid", "Rasterize a building to PGM + JSON sidecar");
  std::string export_building;
  std::string prefix = "grid";
  double resolution = 0.1;
  export_cmd->add_option("building", export_building, "Building JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", prefix, "Output prefix; writes <prefix>.pgm and <prefix>.json")
  ->capture_default_str();
  export_cmd->add_option("--resolution", resolution, "Metres per cell")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return run_scenario_cmd(scenario_path, seed, out_dir);
    }
    if (*locate) {
      auto opt_path = [](const std::optional<std::string> & s) {
          return s ? std::optional<fs::path>(*s) : std::nullopt;
        };
      return locate_cmd(log_path, opt_path(building_path), opt_path(truth_path), anchor_height, opt_path(report_path));
    }
    if (*serve) {
      Scenario s = scenario_for_service(serve_scenario, serve_building);
      const std::string env_seed = env_or("BIMNAV_SEED", "");
      if (serve_seed) {
        s.seed = *serve_seed;
      } else if (!env_seed.empty()) {
        s.seed = std::stoull(env_seed);
      }
      service::Options options;
      options.time_scale = time_scale;
      service::Service svc(s, options);
      std::cerr << "serving on http://" << host << ":" << port << "\n";
      return svc.listen(host, port) ? 0 : 1;
    }
    if (*plan_cmd) {
      const BuildingGraph building = load_building_file(plan_building);
      WeightConfig cfg;
      if (weights_path) {
        cfg = weights_from_json(nlohmann::json::parse(read_file(*weights_path)));
      }
      const Timestamp now = at ? parse_iso8601(*at) :
        std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
      std::cout << to_json(plan(building, from, to, cfg, now)).dump(2) << "\n";
      return 0;
    }
    if (*export_cmd) {
      const SemanticOccupancyGrid grid = rasterize(load_building_file(export_building), resolution);
      write_file(prefix + ".pgm", to_pgm(grid));
      write_file(prefix + ".json", grid_sidecar(grid).dump() + "\n");
      return 0;
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
