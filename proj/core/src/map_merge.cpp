#include "bimnav/map_merge.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bimnav/error.hpp"
#include "bimnav/raycast.hpp"

namespace bimnav
{

void merge_scan_inplace(
  SemanticOccupancyGrid & grid, const Pose2D & pose, const LaserScan & scan,
  const InverseSensorParams & model)
{
  const auto start = grid.cell_of(pose.position());
  if (!start) {
    throw InvalidArgument("merge_scan: pose outside the grid");
  }

  enum : std::uint8_t { untouched = 0, free_cell = 1, occupied_cell = 2 };
  std::vector<std::uint8_t> mark(grid.size(), untouched);
  std::vector<std::size_t> touched;
  auto set_mark = [&](int x, int y, std::uint8_t m) {
      std::uint8_t & cur = mark[grid.index(x, y)];
      if (cur == untouched) {
        touched.push_back(grid.index(x, y));
      }
      cur = std::max(cur, m);
    };

  set_mark(start->x, start->y, free_cell);
  for (std::size_t k = 0; k < scan.ranges.size(); ++k) {
    const double z = std::clamp(scan.ranges[k], 0.0, scan.range_max);
    const bool hit = z < scan.range_max;
    const double angle = pose.theta + scan.angle(k);
    const CellIndex end = grid.cell_unchecked({pose.x + z * std::cos(angle), pose.y + z * std::sin(angle)});
    if (end == *start) {
      if (hit) {
        set_mark(end.x, end.y, occupied_cell);
      }
      continue;
    }
    bresenham(*start, end, [&](int x, int y) {
        if (!grid.contains(x, y)) {
          return false;
        }
        const bool is_end = x == end.x && y == end.y;
        set_mark(x, y, is_end && hit ? occupied_cell : free_cell);
        return true;
      });
  }

  const auto cls = grid.classes();
  for (std::size_t i : touched) {
    if (cls[i] != kUnknownClass && !model.observable.test(cls[i])) {
      continue;
    }
    const int x = static_cast<int>(i % grid.width());
    const int y = static_cast<int>(i / grid.width());
    const double delta = mark[i] == occupied_cell ? model.l_occ : model.l_free;
    grid.set_logodds(x, y, std::clamp(grid.logodds(x, y) + delta, model.l_min, model.l_max));
  }
}

SemanticOccupancyGrid merge_scan(
  SemanticOccupancyGrid grid, const Pose2D & pose, const LaserScan & scan,
  const InverseSensorParams & model)
{
  merge_scan_inplace(grid, pose, scan, model);
  return grid;
}

}  // namespace bimnav
