#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bimnav/geometry.hpp"
#include "bimnav/time.hpp"

namespace bimnav
{

using ClassId = std::uint8_t;

/// Class id 0 stands for "unknown / none" and is always present.
inline constexpr ClassId kUnknownClass = 0;

struct MaterialClass
{
  ClassId id{kUnknownClass};
  std::string name;
  bool detectable_by_lidar{true};
};

enum class Hazard { none, high };
enum class DoorSwing { push, pull };

struct Wall
{
  std::string id;
  ClassId material{kUnknownClass};
};

/// A room (IfcSpace). Wall i runs along polygon edge i -> i+1.
struct RoomNode
{
  std::string room_id;
  std::string name;
  Point2 center;
  double area{0.0};
  std::vector<Wall> walls;
  std::optional<Timestamp> last_scan;
  Hazard hazard{Hazard::none};
  Polygon polygon;
};

/// A physical door between two rooms, with the swing seen from each side.
struct Door
{
  std::string door_id;
  std::string room_a;
  std::string room_b;
  Point2 location;
  DoorSwing a_to_b{DoorSwing::push};
  DoorSwing b_to_a{DoorSwing::push};
};

/// One traversal direction of a door.
struct DoorHyperedge
{
  std::string door_id;
  std::string tail_room;
  std::string head_room;
  Point2 location;
  DoorSwing direction_cost{DoorSwing::push};
};

struct WeightConfig
{
  double w_m_invisible{12.0};
  double w_m_visible{4.0};
  // Bands are [0, t0), [t0, t1), [t1, inf).
  double area_thresholds[2]{50.0, 100.0};
  double area_weights[3]{2.0, 8.0, 12.0};
  std::chrono::seconds scan_thresholds[2]{days(7), days(14)};
  double scan_weights[3]{10.0, 6.0, 0.0};
  double w_h_high{500.0};
  double w_d_push{2.0};
  double w_d_pull{6.0};
  double warning_threshold{500.0};

  /// Throws InvalidArgument on a negative weight or non-increasing thresholds.
  void validate() const;
};

struct NodeWeightBreakdown
{
  double material{0.0};
  double area{0.0};
  double scan{0.0};
  double hazard{0.0};

  double total() const {return material + area + scan + hazard;}
};

double material_weight(const RoomNode & room, std::span<const MaterialClass> materials, const WeightConfig & cfg);
double area_weight(double area, const WeightConfig & cfg);
double scan_weight(const std::optional<Timestamp> & last_scan, Timestamp now, const WeightConfig & cfg);
double hazard_weight(Hazard hazard, const WeightConfig & cfg);

NodeWeightBreakdown node_weight_breakdown(
  const RoomNode & room, std::span<const MaterialClass> materials,
  const WeightConfig & cfg, Timestamp now);

double node_weight(
  const RoomNode & room, std::span<const MaterialClass> materials,
  const WeightConfig & cfg, Timestamp now);

double edge_weight(const DoorHyperedge & edge, const WeightConfig & cfg);

/// Rooms are nodes, each door direction is a hyperedge. Immutable once built;
/// the `with_*` members return modified copies.
class BuildingGraph
{
public:
  /// Validates and indexes. Throws ReferenceError, GeometryError, InvalidArgument.
  static BuildingGraph create(
    std::vector<MaterialClass> materials, std::vector<RoomNode> rooms, std::vector<Door> doors);

  const std::map<std::string, RoomNode> & rooms() const {return rooms_;}
  const std::vector<Door> & doors() const {return doors_;}
  const std::vector<DoorHyperedge> & hyperedges() const {return hyperedges_;}
  const std::vector<MaterialClass> & materials() const {return materials_;}

  bool has_room(std::string_view id) const;
  /// Throws ReferenceError for unknown ids.
  const RoomNode & room(std::string_view id) const;
  const MaterialClass * material(ClassId id) const;

  /// Indices into hyperedges() leaving `room_id`, sorted by (head, door id).
  std::span<const std::size_t> outgoing(std::string_view room_id) const;

  /// Room whose polygon contains `p`, first by id order.
  std::optional<std::string> room_at(const Point2 & p) const;

  double node_weight(std::string_view room_id, const WeightConfig & cfg, Timestamp now) const;

  BuildingGraph with_scan(std::string_view room_id, Timestamp now) const;
  BuildingGraph with_hazard(std::string_view room_id, Hazard hazard) const;

private:
  void index();

  std::vector<MaterialClass> materials_;
  std::map<std::string, RoomNode> rooms_;
  std::vector<Door> doors_;
  std::vector<DoorHyperedge> hyperedges_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> outgoing_;
};

/// Returns a copy with last_scan of `room_id` set to `now`.
BuildingGraph touch_scan(const BuildingGraph & graph, std::string_view room_id, Timestamp now);

/// Parses the JSON building description. Throws ParseError with a line or
/// field path, ReferenceError naming a dangling id, GeometryError.
BuildingGraph load_building(std::string_view document);
BuildingGraph load_building_file(const std::filesystem::path & path);

std::string to_string(DoorSwing s);
std::string to_string(Hazard h);

}  // namespace bimnav
