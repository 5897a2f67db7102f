#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace bimnav
{

struct Point2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

struct Point3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const Point3 &, const Point3 &) = default;
};

inline double distance(const Point2 &a, const Point2 &b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Point3 &a, const Point3 &b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  } else if (a > std::numbers::pi) {
    a -= two_pi;
  }
  return a;
}

/// Robot pose in the map frame. theta is kept in (-pi, pi].
struct Pose2D
{
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_)
  : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Point2 position() const {return {x, y};}

  friend bool operator==(const Pose2D &, const Pose2D &) = default;
};

using Polygon = std::vector<Point2>;

/// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(std::span<const Point2> polygon);

/// Even-odd rule. Points exactly on an edge count as inside.
bool point_in_polygon(std::span<const Point2> polygon, const Point2 &p);

/// True when no two non-adjacent edges touch and no edge is degenerate.
bool is_simple_polygon(std::span<const Point2> polygon);

bool segments_intersect(const Point2 &a, const Point2 &b, const Point2 &c, const Point2 &d);

double point_segment_distance(const Point2 &p, const Point2 &a, const Point2 &b);

}  // namespace bimnav
