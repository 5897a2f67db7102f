#include <fstream>
#include <sstream>

#include "bimnav/building.hpp"
#include "bimnav/error.hpp"
#include "bimnav/serialization.hpp"
#include "json_reader.hpp"

namespace bimnav
{

namespace
{

using detail::Field;

DoorSwing parse_swing(const Field & f)
{
  const std::string s = f.string();
  if (s == "push") {
    return DoorSwing::push;
  }
  if (s == "pull") {
    return DoorSwing::pull;
  }
  f.fail("expected \"push\" or \"pull\", got \"" + s + "\"");
}

Hazard parse_hazard(const Field & f)
{
  const std::string s = f.string();
  if (s == "none") {
    return Hazard::none;
  }
  if (s == "high") {
    return Hazard::high;
  }
  f.fail("expected \"none\" or \"high\", got \"" + s + "\"");
}

ClassId parse_class_id(const Field & f)
{
  const long id = f.integer();
  if (id < 0 || id > 255) {
    f.fail("material id must be in [0, 255]");
  }
  return static_cast<ClassId>(id);
}

}  // namespace

BuildingGraph load_building(std::string_view document)
{
  const nlohmann::json doc = detail::parse_document(document, "building");
  const Field root(doc, "$");

  std::vector<MaterialClass> materials;
  const Field mats = root["materials"];
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const Field m = mats[i];
    materials.push_back({parse_class_id(m["id"]), m["name"].string(), m["detectable_by_lidar"].boolean()});
  }

  std::vector<RoomNode> rooms;
  const Field rs = root["rooms"];
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const Field r = rs[i];
    RoomNode room;
    room.room_id = r["id"].string();
    room.name = r["name"].string();
    room.center = r["center"].point2();
    room.area = r["area_m2"].number();
    const Field poly = r["polygon"];
    for (std::size_t k = 0; k < poly.size(); ++k) {
      room.polygon.push_back(poly[k].point2());
    }
    const Field walls = r["walls"];
    for (std::size_t k = 0; k < walls.size(); ++k) {
      room.walls.push_back({walls[k]["id"].string(), parse_class_id(walls[k]["material"])});
    }
    const Field scan = r["last_scan"];
    if (!scan.is_null()) {
      try {
        room.last_scan = parse_iso8601(scan.string());
      } catch (const ParseError & e) {
        scan.fail(e.what());
      }
    }
    room.hazard = r.has("hazard") ? parse_hazard(r["hazard"]) : Hazard::none;
    rooms.push_back(std::move(room));
  }

  std::vector<Door> doors;
  const Field ds = root["doors"];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Field d = ds[i];
    Door door;
    door.door_id = d["id"].string();
    const Field pair = d["rooms"];
    if (pair.size() != 2) {
      pair.fail("a door joins exactly two rooms");
    }
    door.room_a = pair[0].string();
    door.room_b = pair[1].string();
    door.location = d["location"].point2();
    door.a_to_b = parse_swing(d["swing"]["a_to_b"]);
    door.b_to_a = parse_swing(d["swing"]["b_to_a"]);
    doors.push_back(std::move(door));
  }

  return BuildingGraph::create(std::move(materials), std::move(rooms), std::move(doors));
}

BuildingGraph load_building_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open building file '" + path.string() + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return load_building(ss.str());
}

nlohmann::json to_json(const BuildingGraph & graph)
{
  nlohmann::json mats = nlohmann::json::array();
  for (const auto & m : graph.materials()) {
    mats.push_back({{"id", m.id}, {"name", m.name}, {"detectable_by_lidar", m.detectable_by_lidar}});
  }
  nlohmann::json rooms = nlohmann::json::array();
  for (const auto & [id, r] : graph.rooms()) {
    nlohmann::json poly = nlohmann::json::array();
    for (const auto & p : r.polygon) {
      poly.push_back(to_json(p));
    }
    nlohmann::json walls = nlohmann::json::array();
    for (const auto & w : r.walls) {
      walls.push_back({{"id", w.id}, {"material", w.material}});
    }
    rooms.push_back(
      {{"id", r.room_id}, {"name", r.name}, {"center", to_json(r.center)}, {"area_m2", r.area},
        {"polygon", poly}, {"walls", walls},
        {"last_scan", r.last_scan ? nlohmann::json(format_iso8601(*r.last_scan)) : nlohmann::json()},
        {"hazard", to_string(r.hazard)}});
  }
  nlohmann::json doors = nlohmann::json::array();
  for (const auto & d : graph.doors()) {
    doors.push_back(
      {{"id", d.door_id}, {"rooms", {d.room_a, d.room_b}}, {"location", to_json(d.location)},
        {"swing", {{"a_to_b", to_string(d.a_to_b)}, {"b_to_a", to_string(d.b_to_a)}}}});
  }
  return {{"materials", mats}, {"rooms", rooms}, {"doors", doors}};
}

nlohmann::json to_json(const WeightConfig & cfg)
{
  return {
    {"w_m_invisible", cfg.w_m_invisible},
    {"w_m_visible", cfg.w_m_visible},
    {"area_thresholds", {cfg.area_thresholds[0], cfg.area_thresholds[1]}},
    {"area_weights", {cfg.area_weights[0], cfg.area_weights[1], cfg.area_weights[2]}},
    {"scan_thresholds_days",
      {cfg.scan_thresholds[0].count() / 86400.0, cfg.scan_thresholds[1].count() / 86400.0}},
    {"scan_weights", {cfg.scan_weights[0], cfg.scan_weights[1], cfg.scan_weights[2]}},
    {"w_h_high", cfg.w_h_high},
    {"w_d_push", cfg.w_d_push},
    {"w_d_pull", cfg.w_d_pull},
    {"warning_threshold", cfg.warning_threshold}};
}

WeightConfig weights_from_json(const nlohmann::json & j, WeightConfig base)
{
  const Field root(j, "$");
  if (!j.is_object()) {
    root.fail("expected an object");
  }
  auto scalar = [&](const char * key, double & out) {
      if (root.has(key)) {
        out = root[key].number();
      }
    };
  auto array = [&](const char * key, double * out, std::size_t n) {
      if (root.has(key)) {
        const Field f = root[key];
        if (f.size() != n) {
          f.fail("expected " + std::to_string(n) + " values");
        }
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = f[i].number();
        }
      }
    };
  for (const auto & [key, value] : j.items()) {
    static const char * known[] = {
      "w_m_invisible", "w_m_visible", "area_thresholds", "area_weights", "scan_thresholds_days",
      "scan_weights", "w_h_high", "w_d_push", "w_d_pull", "warning_threshold"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char * k) {return key == k;}) == std::end(known)) {
      root.fail("unknown weight '" + key + "'");
    }
  }
  scalar("w_m_invisible", base.w_m_invisible);
  scalar("w_m_visible", base.w_m_visible);
  array("area_thresholds", base.area_thresholds, 2);
  array("area_weights", base.area_weights, 3);
  array("scan_weights", base.scan_weights, 3);
  scalar("w_h_high", base.w_h_high);
  scalar("w_d_push", base.w_d_push);
  scalar("w_d_pull", base.w_d_pull);
  scalar("warning_threshold", base.warning_threshold);
  if (root.has("scan_thresholds_days")) {
    double d[2];
    array("scan_thresholds_days", d, 2);
    for (int i = 0; i < 2; ++i) {
      base.scan_thresholds[i] = std::chrono::seconds(static_cast<long>(std::llround(d[i] * 86400.0)));
    }
  }
  base.validate();
  return base;
}

}  // namespace bimnav
