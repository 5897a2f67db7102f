#include "bimnav/building.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "bimnav/error.hpp"

namespace bimnav
{

void WeightConfig::validate() const
{
  const double weights[] = {
    w_m_invisible, w_m_visible, area_weights[0], area_weights[1], area_weights[2],
    scan_weights[0], scan_weights[1], scan_weights[2], w_h_high, w_d_push, w_d_pull,
    area_thresholds[0], warning_threshold};
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("weights and thresholds must be finite and non-negative");
    }
  }
  if (!(area_thresholds[0] < area_thresholds[1])) {
    throw InvalidArgument("area thresholds must be strictly increasing");
  }
  if (scan_thresholds[0].count() < 0 || !(scan_thresholds[0] < scan_thresholds[1])) {
    throw InvalidArgument("scan thresholds must be non-negative and strictly increasing");
  }
}

double material_weight(
  const RoomNode & room, std::span<const MaterialClass> materials, const WeightConfig & cfg)
{
  // A room is as risky as its worst wall.
  double w = cfg.w_m_visible;
  for (const auto & wall : room.walls) {
    for (const auto & m : materials) {
      if (m.id == wall.material && !m.detectable_by_lidar) {
        w = std::max(w, cfg.w_m_invisible);
      }
    }
  }
  return w;
}

double area_weight(double area, const WeightConfig & cfg)
{
  if (area < cfg.area_thresholds[0]) {
    return cfg.area_weights[0];
  }
  if (area < cfg.area_thresholds[1]) {
    return cfg.area_weights[1];
  }
  return cfg.area_weights[2];
}

double scan_weight(const std::optional<Timestamp> & last_scan, Timestamp now, const WeightConfig & cfg)
{
  if (!last_scan) {
    return cfg.scan_weights[2];
  }
  const auto age = std::max(now - *last_scan, std::chrono::seconds{0});
  if (age < cfg.scan_thresholds[0]) {
    return cfg.scan_weights[0];
  }
  if (age < cfg.scan_thresholds[1]) {
    return cfg.scan_weights[1];
  }
  return cfg.scan_weights[2];
}

double hazard_weight(Hazard hazard, const WeightConfig & cfg)
{
  return hazard == Hazard::high ? cfg.w_h_high : 0.0;
}

NodeWeightBreakdown node_weight_breakdown(
  const RoomNode & room, std::span<const MaterialClass> materials,
  const WeightConfig & cfg, Timestamp now)
{
  return {
    material_weight(room, materials, cfg),
    area_weight(room.area, cfg),
    scan_weight(room.last_scan, now, cfg),
    hazard_weight(room.hazard, cfg)};
}

double node_weight(
  const RoomNode & room, std::span<const MaterialClass> materials,
  const WeightConfig & cfg, Timestamp now)
{
  return node_weight_breakdown(room, materials, cfg, now).total();
}

double edge_weight(const DoorHyperedge & edge, const WeightConfig & cfg)
{
  return edge.direction_cost == DoorSwing::push ? cfg.w_d_push : cfg.w_d_pull;
}

BuildingGraph BuildingGraph::create(
  std::vector<MaterialClass> materials, std::vector<RoomNode> rooms, std::vector<Door> doors)
{
  BuildingGraph g;

  std::set<ClassId> class_ids;
  for (const auto & m : materials) {
    if (!class_ids.insert(m.id).second) {
      throw InvalidArgument("duplicate material id " + std::to_string(m.id));
    }
  }
  if (!class_ids.contains(kUnknownClass)) {
    materials.insert(materials.begin(), MaterialClass{kUnknownClass, "unknown", true});
  }
  std::sort(materials.begin(), materials.end(), [](const auto & a, const auto & b) {return a.id < b.id;});
  g.materials_ = std::move(materials);

  if (rooms.empty()) {
    throw InvalidArgument("building has no rooms");
  }
  for (auto & r : rooms) {
    if (r.room_id.empty()) {
      throw InvalidArgument("room with empty id");
    }
    if (!(r.area > 0.0)) {
      throw GeometryError("room '" + r.room_id + "': area must be positive");
    }
    if (!is_simple_polygon(r.polygon)) {
      throw GeometryError("room '" + r.room_id + "': polygon is degenerate or self-intersecting");
    }
    if (!point_in_polygon(r.polygon, r.center)) {
      throw GeometryError("room '" + r.room_id + "': center lies outside its polygon");
    }
    if (r.walls.size() != r.polygon.size()) {
      throw GeometryError(
              "room '" + r.room_id + "': expected one wall per polygon edge (" +
              std::to_string(r.polygon.size()) + "), got " + std::to_string(r.walls.size()));
    }
    for (const auto & w : r.walls) {
      if (!g.material(w.material)) {
        throw ReferenceError(std::to_string(w.material), "room '" + r.room_id + "' wall '" + w.id + "' material");
      }
    }
    const std::string id = r.room_id;
    if (!g.rooms_.emplace(id, std::move(r)).second) {
      throw InvalidArgument("duplicate room id '" + id + "'");
    }
  }

  std::set<std::string> door_ids;
  for (const auto & d : doors) {
    if (!door_ids.insert(d.door_id).second) {
      throw InvalidArgument("duplicate door id '" + d.door_id + "'");
    }
    if (!g.has_room(d.room_a)) {
      throw ReferenceError(d.room_a, "door '" + d.door_id + "'");
    }
    if (!g.has_room(d.room_b)) {
      throw ReferenceError(d.room_b, "door '" + d.door_id + "'");
    }
    if (d.room_a == d.room_b) {
      throw InvalidArgument("door '" + d.door_id + "' connects room '" + d.room_a + "' to itself");
    }
  }
  g.doors_ = std::move(doors);
  g.index();
  return g;
}

void BuildingGraph::index()
{
  hyperedges_.clear();
  outgoing_.clear();
  for (const auto & d : doors_) {
    hyperedges_.push_back({d.door_id, d.room_a, d.room_b, d.location, d.a_to_b});
    hyperedges_.push_back({d.door_id, d.room_b, d.room_a, d.location, d.b_to_a});
  }
  std::sort(
    hyperedges_.begin(), hyperedges_.end(), [](const DoorHyperedge & a, const DoorHyperedge & b) {
      return std::tie(a.tail_room, a.head_room, a.door_id) < std::tie(b.tail_room, b.head_room, b.door_id);
    });
  for (const auto & [id, room] : rooms_) {
    outgoing_[id];
  }
  for (std::size_t i = 0; i < hyperedges_.size(); ++i) {
    outgoing_[hyperedges_[i].tail_room].push_back(i);
  }
}

bool BuildingGraph::has_room(std::string_view id) const
{
  return rooms_.find(std::string(id)) != rooms_.end();
}

const RoomNode & BuildingGraph::room(std::string_view id) const
{
  auto it = rooms_.find(std::string(id));
  if (it == rooms_.end()) {
    throw ReferenceError(std::string(id), "room lookup");
  }
  return it->second;
}

const MaterialClass * BuildingGraph::material(ClassId id) const
{
  for (const auto & m : materials_) {
    if (m.id == id) {
      return &m;
    }
  }
  return nullptr;
}

std::span<const std::size_t> BuildingGraph::outgoing(std::string_view room_id) const
{
  auto it = outgoing_.find(room_id);
  if (it == outgoing_.end()) {
    throw ReferenceError(std::string(room_id), "outgoing edges");
  }
  return it->second;
}

std::optional<std::string> BuildingGraph::room_at(const Point2 & p) const
{
  for (const auto & [id, room] : rooms_) {
    if (point_in_polygon(room.polygon, p)) {
      return id;
    }
  }
  return std::nullopt;
}

double BuildingGraph::node_weight(std::string_view room_id, const WeightConfig & cfg, Timestamp now) const
{
  return bimnav::node_weight(room(room_id), materials_, cfg, now);
}

BuildingGraph BuildingGraph::with_scan(std::string_view room_id, Timestamp now) const
{
  BuildingGraph copy = *this;
  auto it = copy.rooms_.find(std::string(room_id));
  if (it == copy.rooms_.end()) {
    throw ReferenceError(std::string(room_id), "touch_scan");
  }
  it->second.last_scan = now;
  return copy;
}

BuildingGraph BuildingGraph::with_hazard(std::string_view room_id, Hazard hazard) const
{
  BuildingGraph copy = *this;
  auto it = copy.rooms_.find(std::string(room_id));
  if (it == copy.rooms_.end()) {
    throw ReferenceError(std::string(room_id), "set hazard");
  }
  it->second.hazard = hazard;
  return copy;
}

BuildingGraph touch_scan(const BuildingGraph & graph, std::string_view room_id, Timestamp now)
{
  return graph.with_scan(room_id, now);
}

std::string to_string(DoorSwing s)
{
  return s == DoorSwing::push ? "push" : "pull";
}

std::string to_string(Hazard h)
{
  return h == Hazard::high ? "high" : "none";
}

}  // namespace bimnav
