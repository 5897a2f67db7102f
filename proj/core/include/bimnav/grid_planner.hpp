#pragma once

#include <cstdint>
#include <vector>

#include "bimnav/error.hpp"
#include "bimnav/grid.hpp"
#include "bimnav/semantic_planner.hpp"

namespace bimnav
{

inline constexpr double kDefaultInflation = 0.3;

struct MetricPath
{
  std::vector<Point2> points;
  double length{0.0};
};

/// Cells within `inflation` metres (center to center) of an occupied cell.
std::vector<std::uint8_t> inflate(const SemanticOccupancyGrid & grid, double inflation);

/// Thrown when start or goal is unusable.
class BlockedError : public Error
{
public:
  using Error::Error;
};

/// 8-connected A* with sqrt(2) diagonal cost. A diagonal move needs both
/// orthogonal neighbours free. Points are cell centers from start to goal.
/// Throws BlockedError when start/goal is outside the grid or in inflated
/// space, NoPathError when the goal is unreachable.
MetricPath astar(
  const SemanticOccupancyGrid & grid, const Point2 & start, const Point2 & goal,
  double inflation = kDefaultInflation);

/// Same search over a precomputed blocked mask.
MetricPath astar(
  const SemanticOccupancyGrid & grid, const std::vector<std::uint8_t> & blocked,
  const Point2 & start, const Point2 & goal);

/// Chains A* legs pose -> w1 -> ... -> wn over path.x_y_path, dropping the
/// duplicated junction points. A path that never leaves the start cell is empty.
/// Errors name the failing waypoint.
MetricPath stitch(
  const SemanticOccupancyGrid & grid, const Pose2D & pose, const SemanticPath & path,
  double inflation = kDefaultInflation);

double polyline_length(const std::vector<Point2> & points);

}  // namespace bimnav
