#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bimnav/building.hpp"

namespace bimnav
{

struct PathWarning
{
  std::string room_id;
  /// "hazard" or "high_weight" for rooms on the path, "hazard_bypassed" for a
  /// hazardous room that the hazard-blind optimum would have crossed.
  std::string reason;
  double weight{0.0};
  bool on_path{true};

  friend bool operator==(const PathWarning &, const PathWarning &) = default;
};

/// Room/door sequence returned by the semantic planner.
struct SemanticPath
{
  /// room, door, room, ..., room
  std::vector<std::string> semantic_path;
  /// Room centers and door locations, same order as semantic_path.
  std::vector<Point2> x_y_path;
  double total_weight{0.0};
  std::vector<PathWarning> warnings;

  std::vector<std::string> rooms() const;
  std::vector<std::string> doors() const;

  friend bool operator==(const SemanticPath &, const SemanticPath &) = default;
};

/// Minimum total-weight room sequence from `start` to `goal`: the sum of every
/// node weight on the path (start included) plus every door-direction weight.
/// Equal totals are broken by the lexicographically smallest id sequence.
/// Throws ReferenceError for unknown rooms, NoPathError when goal is unreachable.
SemanticPath plan(
  const BuildingGraph & graph, std::string_view start, std::string_view goal,
  const WeightConfig & cfg, Timestamp now);

/// Recomputes the total weight of an alternating room/door sequence, checking
/// that every door joins its neighbours in that direction. Throws
/// InvalidArgument for a malformed sequence.
double path_weight(
  const BuildingGraph & graph, const std::vector<std::string> & semantic_path,
  const WeightConfig & cfg, Timestamp now);

/// Marks every room of `visited` as scanned at `now`.
BuildingGraph replan_after_visit(const BuildingGraph & graph, const SemanticPath & visited, Timestamp now);
BuildingGraph replan_after_visit(
  const BuildingGraph & graph, const std::vector<std::string> & rooms, Timestamp now);

}  // namespace bimnav
