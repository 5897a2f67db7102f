#include "bimnav/grid_planner.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace bimnav
{

std::vector<std::uint8_t> inflate(const SemanticOccupancyGrid & grid, double inflation)
{
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::uint8_t> blocked(grid.size(), 0);
  const int reach = static_cast<int>(std::floor(inflation / grid.resolution() + 1e-9));
  const double reach2 = (inflation / grid.resolution()) * (inflation / grid.resolution()) + 1e-9;
  std::vector<std::pair<int, int>> kernel;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx * dx + dy * dy <= reach2) {
        kernel.emplace_back(dx, dy);
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!grid.occupied(x, y)) {
        continue;
      }
      for (auto [dx, dy] : kernel) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (grid.contains(nx, ny)) {
          blocked[grid.index(nx, ny)] = 1;
        }
      }
    }
  }
  return blocked;
}

MetricPath astar(
  const SemanticOccupancyGrid & grid, const Point2 & start, const Point2 & goal, double inflation)
{
  return astar(grid, inflate(grid, inflation), start, goal);
}

MetricPath astar(
  const SemanticOccupancyGrid & grid, const std::vector<std::uint8_t> & blocked,
  const Point2 & start, const Point2 & goal)
{
  const auto s = grid.cell_of(start);
  const auto g = grid.cell_of(goal);
  if (!s || blocked[grid.index(s->x, s->y)]) {
    throw BlockedError("start is outside the map or too close to an obstacle");
  }
  if (!g || blocked[grid.index(g->x, g->y)]) {
    throw BlockedError("goal is outside the map or too close to an obstacle");
  }

  const double res = grid.resolution();
  const std::size_t n = grid.size();
  const std::size_t start_i = grid.index(s->x, s->y);
  const std::size_t goal_i = grid.index(g->x, g->y);
  const Point2 goal_c = grid.cell_center(g->x, g->y);

  std::vector<double> cost(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::uint8_t> closed(n, 0);

  // (f, g-tiebreak, index); smaller f first, then larger g (deeper), then index.
  using Entry = std::tuple<double, double, std::size_t>;
  auto cmp = [](const Entry & a, const Entry & b) {
      if (std::get<0>(a) != std::get<0>(b)) {
        return std::get<0>(a) > std::get<0>(b);
      }
      if (std::get<1>(a) != std::get<1>(b)) {
        return std::get<1>(a) < std::get<1>(b);
      }
      return std::get<2>(a) > std::get<2>(b);
    };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);

  auto heuristic = [&](int x, int y) {return distance(grid.cell_center(x, y), goal_c);};
  cost[start_i] = 0.0;
  open.emplace(heuristic(s->x, s->y), 0.0, start_i);

  static constexpr int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const double diag = std::sqrt(2.0) * res;

  while (!open.empty()) {
    const auto [f, gc, idx] = open.top();
    open.pop();
    if (closed[idx]) {
      continue;
    }
    closed[idx] = 1;
    if (idx == goal_i) {
      break;
    }
    const int x = static_cast<int>(idx % grid.width());
    const int y = static_cast<int>(idx / grid.width());
    for (int k = 0; k < 8; ++k) {
      const int nx = x + dx[k];
      const int ny = y + dy[k];
      if (!grid.contains(nx, ny)) {
        continue;
      }
      const std::size_t ni = grid.index(nx, ny);
      if (blocked[ni] || closed[ni]) {
        continue;
      }
      if (k >= 4 && (blocked[grid.index(nx, y)] || blocked[grid.index(x, ny)])) {
        continue;
      }
      const double nc = cost[idx] + (k >= 4 ? diag : res);
      if (nc < cost[ni]) {
        cost[ni] = nc;
        parent[ni] = idx;
        open.emplace(nc + heuristic(nx, ny), nc, ni);
      }
    }
  }

  if (!closed[goal_i]) {
    throw NoPathError("no collision-free path between the requested cells");
  }
  MetricPath path;
  for (std::size_t i = goal_i; ; i = parent[i]) {
    path.points.push_back(
      grid.cell_center(static_cast<int>(i % grid.width()), static_cast<int>(i / grid.width())));
    if (i == start_i) {
      break;
    }
  }
  std::reverse(path.points.begin(), path.points.end());
  path.length = polyline_length(path.points);
  return path;
}

MetricPath stitch(
  const SemanticOccupancyGrid & grid, const Pose2D & pose, const SemanticPath & path, double inflation)
{
  const auto blocked = inflate(grid, inflation);
  MetricPath out;
  Point2 from = pose.position();
  for (std::size_t i = 0; i < path.x_y_path.size(); ++i) {
    const Point2 & to = path.x_y_path[i];
    const std::string name = i < path.semantic_path.size() ? path.semantic_path[i] : std::to_string(i);
    MetricPath leg;
    try {
      leg = astar(grid, blocked, from, to);
    } catch (const BlockedError & e) {
      throw BlockedError("waypoint " + std::to_string(i) + " ('" + name + "'): " + e.what());
    } catch (const NoPathError & e) {
      throw NoPathError("waypoint " + std::to_string(i) + " ('" + name + "'): " + e.what());
    }
    for (const Point2 & p : leg.points) {
      if (out.points.empty() || !(out.points.back() == p)) {
        out.points.push_back(p);
      }
    }
    from = to;
  }
  if (out.points.size() <= 1) {
    out.points.clear();
  }
  out.length = polyline_length(out.points);
  return out;
}

double polyline_length(const std::vector<Point2> & points)
{
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    len += distance(points[i - 1], points[i]);
  }
  return len;
}

}  // namespace bimnav
