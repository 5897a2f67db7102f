#include "bimnav/geometry.hpp"

#include <algorithm>

namespace bimnav
{

namespace
{

double cross(const Point2 &o, const Point2 &a, const Point2 &b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point2 &a, const Point2 &b, const Point2 &p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(double v)
{
  constexpr double eps = 1e-12;
  return v > eps ? 1 : (v < -eps ? -1 : 0);
}

}  // namespace

double signed_area(std::span<const Point2> polygon)
{
  double acc = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 &a = polygon[i];
    const Point2 &b = polygon[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

bool point_in_polygon(std::span<const Point2> polygon, const Point2 &p)
{
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 &a = polygon[i];
    const Point2 &b = polygon[j];
    if (point_segment_distance(p, a, b) < 1e-12) {
      return true;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

bool segments_intersect(const Point2 &a, const Point2 &b, const Point2 &c, const Point2 &d)
{
  const int d1 = sign(cross(c, d, a));
  const int d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c));
  const int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) {
    return true;
  }
  return (d1 == 0 && on_segment(c, d, a)) || (d2 == 0 && on_segment(c, d, b)) ||
         (d3 == 0 && on_segment(a, b, c)) || (d4 == 0 && on_segment(a, b, d));
}

bool is_simple_polygon(std::span<const Point2> polygon)
{
  const std::size_t n = polygon.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(polygon[i], polygon[(i + 1) % n]) < 1e-12) {
      return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 &a = polygon[i];
    const Point2 &b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        continue;
      }
      if (segments_intersect(a, b, polygon[j], polygon[(j + 1) % n])) {
        return false;
      }
    }
  }
  // Adjacent edges may still fold back onto each other.
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 &prev = polygon[(i + n - 1) % n];
    const Point2 &cur = polygon[i];
    const Point2 &next = polygon[(i + 1) % n];
    if (sign(cross(prev, cur, next)) == 0) {
      const double dot = (cur.x - prev.x) * (next.x - cur.x) + (cur.y - prev.y) * (next.y - cur.y);
      if (dot < 0.0) {
        return false;
      }
    }
  }
  return std::abs(signed_area(polygon)) > 1e-12;
}

double point_segment_distance(const Point2 &p, const Point2 &a, const Point2 &b)
{
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) {
    return distance(p, a);
  }
  const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return distance(p, Point2{a.x + t * vx, a.y + t * vy});
}

}  // namespace bimnav
