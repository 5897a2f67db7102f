#include "bimnav/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bimnav/error.hpp"
#include "bimnav/serialization.hpp"
#include "json_reader.hpp"

namespace bimnav
{

namespace
{

using detail::Field;

void check_keys(const Field & f, std::initializer_list<const char *> known)
{
  if (!f.raw().is_object()) {
    f.fail("expected an object");
  }
  for (const auto & [key, value] : f.raw().items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char * k) {return key == k;})) {
      f.fail("unknown key '" + key + "'");
    }
  }
}

void apply_config(const Field & f, StackConfig & c)
{
  check_keys(f, {"resolution", "particles", "beam_stride", "warmup_ticks", "merge_scans", "replan_period",
      "uwb_sigma", "tag_height", "max_mission_time", "scan_beams", "scan_sigma", "range_max"});
  auto positive = [&](const char * key, double & out) {
      if (f.has(key)) {
        out = f[key].number();
        if (!(out > 0.0)) {
          f[key].fail("must be positive");
        }
      }
    };
  auto count = [&](const char * key, auto & out) {
      if (f.has(key)) {
        const long v = f[key].integer();
        if (v < 0) {
          f[key].fail("must be non-negative");
        }
        out = static_cast<std::remove_reference_t<decltype(out)>>(v);
      }
    };
  positive("resolution", c.resolution);
  count("particles", c.particles);
  count("beam_stride", c.beam_stride);
  count("warmup_ticks", c.warmup_ticks);
  count("replan_period", c.replan_period);
  count("scan_beams", c.scan.beams);
  if (f.has("merge_scans")) {
    c.merge_scans = f["merge_scans"].boolean();
  }
  if (f.has("uwb_sigma")) {
    c.uwb_sigma = std::max(0.0, f["uwb_sigma"].number());
  }
  if (f.has("scan_sigma")) {
    c.scan.sigma = std::max(0.0, f["scan_sigma"].number());
  }
  positive("tag_height", c.tag_height);
  positive("max_mission_time", c.max_mission_time);
  positive("range_max", c.scan.range_max);
  if (c.particles == 0 || c.beam_stride == 0 || c.scan.beams == 0) {
    f.fail("particles, beam_stride and scan_beams must be positive");
  }
}

}  // namespace

Scenario load_scenario(std::string_view document, const std::filesystem::path & base_dir)
{
  const nlohmann::json doc = detail::parse_document(document, "scenario");
  const Field root(doc, "$");
  check_keys(root, {"building", "start_time", "initial_pose", "anchors", "obstacles", "hazards", "missions",
      "seed", "weights", "config"});

  Scenario s;
  s.building_path = root["building"].string();
  if (s.building_path.is_relative()) {
    s.building_path = base_dir / s.building_path;
  }
  s.building = load_building_file(s.building_path);
  s.start_time = parse_iso8601(root["start_time"].string());

  const Field pose = root["initial_pose"];
  s.initial_pose = Pose2D(pose["x"].number(), pose["y"].number(), pose.has("theta") ? pose["theta"].number() : 0.0);

  if (root.has("anchors")) {
    const Field anchors = root["anchors"];
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const Field a = anchors[i];
      s.anchors.push_back({a["id"].string(), a["position"].point3()});
    }
  }
  if (root.has("obstacles")) {
    const Field obstacles = root["obstacles"];
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const Field o = obstacles[i];
      ObstacleSpec spec;
      const Field poly = o["polygon"];
      for (std::size_t k = 0; k < poly.size(); ++k) {
        spec.polygon.push_back(poly[k].point2());
      }
      if (spec.polygon.size() < 3) {
        poly.fail("obstacle polygon needs at least 3 points");
      }
      if (o.has("material")) {
        const long m = o["material"].integer();
        if (m < 0 || m > 255 || !s.building.material(static_cast<ClassId>(m))) {
          throw ReferenceError(std::to_string(m), o.path() + ".material");
        }
        spec.material = static_cast<ClassId>(m);
      }
      s.obstacles.push_back(std::move(spec));
    }
  }
  if (root.has("hazards")) {
    const Field hazards = root["hazards"];
    if (!hazards.raw().is_object()) {
      hazards.fail("expected an object of room id -> \"none\"|\"high\"");
    }
    for (const auto & [room, value] : hazards.raw().items()) {
      const std::string level = Field(value, hazards.path() + "." + room).string();
      if (level != "none" && level != "high") {
        hazards.fail("hazard for '" + room + "' must be \"none\" or \"high\"");
      }
      s.building = s.building.with_hazard(room, level == "high" ? Hazard::high : Hazard::none);
    }
  }
  const Field missions = root["missions"];
  for (std::size_t i = 0; i < missions.size(); ++i) {
    const std::string goal = missions[i].string();
    if (!s.building.has_room(goal)) {
      throw ReferenceError(goal, missions[i].path());
    }
    s.missions.push_back(goal);
  }
  if (root.has("seed")) {
    const long seed = root["seed"].integer();
    if (seed < 0) {
      root["seed"].fail("seed must be non-negative");
    }
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (root.has("weights")) {
    try {
      s.weights = weights_from_json(root["weights"].raw());
    } catch (const Error & e) {
      throw ParseError("$.weights", e.what());
    }
  }
  if (root.has("config")) {
    apply_config(root["config"], s.config);
  }
  return s;
}

Scenario load_scenario_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open scenario file '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str(), path.parent_path());
}

}  // namespace bimnav
