#include "bimnav/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bimnav/error.hpp"

namespace bimnav
{

double logodds(double p)
{
  p = std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  return std::log(p / (1.0 - p));
}

double probability(double l)
{
  return 1.0 / (1.0 + std::exp(-l));
}

SemanticOccupancyGrid::SemanticOccupancyGrid(
  double resolution, Point2 origin, int width, int height, double p_init)
: resolution_(resolution), origin_(origin), width_(width), height_(height)
{
  if (!(resolution > 0.0)) {
    throw InvalidArgument("grid resolution must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("grid dimensions must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const double p = std::clamp(p_init, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  p_.assign(n, p);
  l_.assign(n, bimnav::logodds(p));
  c_.assign(n, kUnknownClass);
}

std::optional<CellIndex> SemanticOccupancyGrid::cell_of(const Point2 & p) const
{
  const CellIndex c = cell_unchecked(p);
  if (!contains(c.x, c.y)) {
    return std::nullopt;
  }
  return c;
}

CellIndex SemanticOccupancyGrid::cell_unchecked(const Point2 & p) const
{
  const double fx = std::floor((p.x - origin_.x) / resolution_);
  const double fy = std::floor((p.y - origin_.y) / resolution_);
  constexpr double lim = std::numeric_limits<int>::max() / 2;
  return {static_cast<int>(std::clamp(fx, -lim, lim)), static_cast<int>(std::clamp(fy, -lim, lim))};
}

Point2 SemanticOccupancyGrid::cell_center(int x, int y) const
{
  return {origin_.x + (x + 0.5) * resolution_, origin_.y + (y + 0.5) * resolution_};
}

void SemanticOccupancyGrid::set_probability(int x, int y, double p)
{
  p = std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  const std::size_t i = index(x, y);
  p_[i] = p;
  l_[i] = bimnav::logodds(p);
}

void SemanticOccupancyGrid::set_logodds(int x, int y, double l)
{
  static const double l_lo = bimnav::logodds(kProbabilityEpsilon);
  static const double l_hi = bimnav::logodds(1.0 - kProbabilityEpsilon);
  l = std::clamp(l, l_lo, l_hi);
  const std::size_t i = index(x, y);
  l_[i] = l;
  p_[i] = bimnav::probability(l);
}

std::size_t SemanticOccupancyGrid::occupied_count() const
{
  return static_cast<std::size_t>(
    std::count_if(p_.begin(), p_.end(), [](double p) {return p >= kOccupiedThreshold;}));
}

std::vector<CellIndex> segment_cells(const SemanticOccupancyGrid & grid, const Point2 & a, const Point2 & b)
{
  // Work in cell units. Snap to 1e-9 cells so that coordinates meant to sit on
  // a grid line do not drift across it.
  const double r = grid.resolution();
  auto snap = [](double v) {return std::round(v * 1e9) / 1e9;};
  const double ax = snap((a.x - grid.origin().x) / r);
  const double ay = snap((a.y - grid.origin().y) / r);
  const double bx = snap((b.x - grid.origin().x) / r);
  const double by = snap((b.y - grid.origin().y) / r);

  // A sample point along the segment; coordinates lying on a grid line are
  // pinned to it exactly.
  struct Sample
  {
    double t;
    std::optional<double> u;
    std::optional<double> v;
  };
  std::vector<Sample> samples{{0.0, ax, ay}, {1.0, bx, by}};
  auto crossings = [&samples](double p0, double p1, bool is_u) {
      if (p0 == p1) {
        return;
      }
      const double lo = std::min(p0, p1);
      const double hi = std::max(p0, p1);
      for (double k = std::ceil(lo); k <= hi; k += 1.0) {
        Sample s{(k - p0) / (p1 - p0), std::nullopt, std::nullopt};
        (is_u ? s.u : s.v) = k;
        samples.push_back(s);
      }
    };
  crossings(ax, bx, true);
  crossings(ay, by, false);
  std::sort(samples.begin(), samples.end(), [](const Sample & l, const Sample & r) {return l.t < r.t;});

  // Merge samples at the same parameter (a corner crossing pins both axes).
  std::vector<Sample> merged;
  for (const Sample & s : samples) {
    if (!merged.empty() && std::abs(merged.back().t - s.t) < 1e-12) {
      if (s.u) {
        merged.back().u = s.u;
      }
      if (s.v) {
        merged.back().v = s.v;
      }
    } else {
      merged.push_back(s);
    }
  }

  std::set<std::pair<int, int>> seen;
  std::vector<CellIndex> out;
  auto add = [&](double t, std::optional<double> u_fixed, std::optional<double> v_fixed) {
      // Axis-parallel segments keep their exact fixed coordinate.
      const double u = u_fixed ? *u_fixed : (ax == bx ? ax : snap(ax + t * (bx - ax)));
      const double v = v_fixed ? *v_fixed : (ay == by ? ay : snap(ay + t * (by - ay)));
      const int cx = static_cast<int>(std::floor(u));
      const int cy = static_cast<int>(std::floor(v));
      if (grid.contains(cx, cy) && seen.emplace(cx, cy).second) {
        out.push_back({cx, cy});
      }
    };
  for (std::size_t i = 0; i < merged.size(); ++i) {
    add(merged[i].t, merged[i].u, merged[i].v);
    if (i + 1 < merged.size()) {
      add(0.5 * (merged[i].t + merged[i + 1].t), std::nullopt, std::nullopt);
    }
  }
  return out;
}

SemanticOccupancyGrid make_grid_for(const BuildingGraph & graph, double resolution, double p_init)
{
  if (!(resolution > 0.0)) {
    throw InvalidArgument("rasterize: resolution must be positive");
  }
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto & [id, room] : graph.rooms()) {
    for (const auto & p : room.polygon) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  const Point2 origin{min_x - 1.5 * resolution, min_y - 1.5 * resolution};
  const int w = static_cast<int>(std::ceil((max_x - min_x) / resolution - 1e-9)) + 3;
  const int h = static_cast<int>(std::ceil((max_y - min_y) / resolution - 1e-9)) + 3;
  return SemanticOccupancyGrid(resolution, origin, w, h, p_init);
}

SemanticOccupancyGrid rasterize(const BuildingGraph & graph, const RasterizeOptions & options)
{
  SemanticOccupancyGrid grid = make_grid_for(graph, options.resolution, options.p_free);

  for (const auto & [id, room] : graph.rooms()) {
    const std::size_t n = room.polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
      const ClassId cls = room.walls[i].material;
      for (const CellIndex & c : segment_cells(grid, room.polygon[i], room.polygon[(i + 1) % n])) {
        // Shared walls: the first known material wins.
        if (!grid.occupied(c.x, c.y) || grid.cls(c.x, c.y) == kUnknownClass) {
          grid.set_class(c.x, c.y, cls);
        }
        grid.set_probability(c.x, c.y, options.p_occupied);
      }
    }
  }

  const double half_gap = 0.5 * options.door_width;
  for (const Door & door : graph.doors()) {
    const CellIndex lo = grid.cell_unchecked({door.location.x - half_gap, door.location.y - half_gap});
    const CellIndex hi = grid.cell_unchecked({door.location.x + half_gap, door.location.y + half_gap});
    for (int y = std::max(lo.y, 0); y <= std::min(hi.y, grid.height() - 1); ++y) {
      for (int x = std::max(lo.x, 0); x <= std::min(hi.x, grid.width() - 1); ++x) {
        if (grid.occupied(x, y) && distance(grid.cell_center(x, y), door.location) <= half_gap + 1e-9) {
          grid.set_probability(x, y, options.p_free);
          grid.set_class(x, y, kUnknownClass);
        }
      }
    }
    const auto cell = grid.cell_of(door.location);
    if (!cell || grid.occupied(cell->x, cell->y)) {
      throw GeometryError(
              "door '" + door.door_id + "': gap vanishes at resolution " +
              std::to_string(options.resolution) + " m");
    }
  }
  return grid;
}

SemanticOccupancyGrid rasterize(const BuildingGraph & graph, double resolution)
{
  RasterizeOptions options;
  options.resolution = resolution;
  return rasterize(graph, options);
}

void fill_polygon(SemanticOccupancyGrid & grid, std::span<const Point2> polygon, double p, ClassId cls)
{
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (point_in_polygon(polygon, grid.cell_center(x, y))) {
        grid.set_probability(x, y, p);
        grid.set_class(x, y, cls);
      }
    }
  }
}

}  // namespace bimnav
