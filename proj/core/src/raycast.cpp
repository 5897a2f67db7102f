#include "bimnav/raycast.hpp"

#include <cmath>
#include <cstdlib>

#include "bimnav/error.hpp"

namespace bimnav
{

ClassMask full_mask()
{
  ClassMask m;
  m.set();
  return m;
}

ClassMask lidar_mask(const BuildingGraph & graph)
{
  ClassMask m;
  m.set(kUnknownClass);
  for (const auto & material : graph.materials()) {
    if (material.detectable_by_lidar) {
      m.set(material.id);
    }
  }
  return m;
}

double raycast_semantic(
  const SemanticOccupancyGrid & grid, const Pose2D & pose, double beam_angle, double z_max,
  const ClassMask & mask)
{
  const auto start = grid.cell_of(pose.position());
  if (!start) {
    throw InvalidArgument("raycast: pose outside the grid");
  }
  const double angle = pose.theta + beam_angle;
  const Point2 end{pose.x + z_max * std::cos(angle), pose.y + z_max * std::sin(angle)};
  const CellIndex stop = grid.cell_unchecked(end);

  const double z_max2 = z_max * z_max;
  const double res = grid.resolution();
  const double ox = grid.origin().x;
  const double oy = grid.origin().y;
  const auto p = grid.probabilities();
  const auto cls = grid.classes();
  double result = z_max;

  bresenham(*start, stop, [&](int x, int y) {
      if (!grid.contains(x, y)) {
        return false;
      }
      const std::size_t i = grid.index(x, y);
      if (p[i] >= kOccupiedThreshold && (cls[i] == kUnknownClass || mask.test(cls[i]))) {
        const double cx = ox + (x + 0.5) * res - pose.x;
        const double cy = oy + (y + 0.5) * res - pose.y;
        const double d2 = cx * cx + cy * cy;
        result = d2 >= z_max2 ? z_max : std::sqrt(d2);
        return false;
      }
      return true;
    });
  return result;
}

}  // namespace bimnav
