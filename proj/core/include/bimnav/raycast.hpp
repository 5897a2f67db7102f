#pragma once

#include <bitset>

#include "bimnav/building.hpp"
#include "bimnav/grid.hpp"

namespace bimnav
{

/// Visits the cells of Bresenham's line from `from` (excluded) to `to`
/// (included) until `visit(x, y)` returns false.
template<class Visit>
void bresenham(CellIndex from, CellIndex to, Visit && visit)
{
  int x = from.x;
  int y = from.y;
  const int dx = to.x > x ? to.x - x : x - to.x;
  const int dy = -(to.y > y ? to.y - y : y - to.y);
  const int sx = x < to.x ? 1 : -1;
  const int sy = y < to.y ? 1 : -1;
  int err = dx + dy;
  while (x != to.x || y != to.y) {
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
    if (!visit(x, y)) {
      return;
    }
  }
}

/// Material classes a sensor can see. Class 0 is always treated as visible.
using ClassMask = std::bitset<256>;

ClassMask full_mask();
/// Every material of the building flagged detectable_by_lidar, plus class 0.
ClassMask lidar_mask(const BuildingGraph & graph);

/// Walks the grid from `pose` along `beam_angle` (relative to the pose heading)
/// with Bresenham's line algorithm and returns the distance from the pose to
/// the center of the first occupied cell whose class is in `mask`. Occupied
/// cells of other classes are skipped. Returns z_max when nothing visible lies
/// within range or the ray leaves the grid. Throws InvalidArgument when the
/// pose is outside the grid.
double raycast_semantic(
  const SemanticOccupancyGrid & grid, const Pose2D & pose, double beam_angle, double z_max,
  const ClassMask & mask);

}  // namespace bimnav
