#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bimnav/building.hpp"
#include "bimnav/geometry.hpp"

namespace bimnav
{

/// Probabilities are clamped into [kProbabilityEpsilon, 1 - kProbabilityEpsilon].
inline constexpr double kProbabilityEpsilon = 1e-6;
inline constexpr double kOccupiedThreshold = 0.5;

double logodds(double p);
double probability(double l);

struct CellIndex
{
  int x{0};
  int y{0};

  friend bool operator==(const CellIndex &, const CellIndex &) = default;
};

/// Row-major 2-D grid of (occupancy, material class, log-odds) cells.
/// Cell (x, y) covers [origin.x + x*res, origin.x + (x+1)*res) and likewise in y.
class SemanticOccupancyGrid
{
public:
  SemanticOccupancyGrid() = default;
  SemanticOccupancyGrid(double resolution, Point2 origin, int width, int height, double p_init = 0.5);

  double resolution() const {return resolution_;}
  Point2 origin() const {return origin_;}
  int width() const {return width_;}
  int height() const {return height_;}
  std::size_t size() const {return p_.size();}

  bool contains(int x, int y) const {return x >= 0 && y >= 0 && x < width_ && y < height_;}
  bool contains(const Point2 & p) const {return cell_of(p).has_value();}
  std::optional<CellIndex> cell_of(const Point2 & p) const;
  /// Cell coordinates without bounds checking.
  CellIndex cell_unchecked(const Point2 & p) const;
  Point2 cell_center(int x, int y) const;
  std::size_t index(int x, int y) const {return static_cast<std::size_t>(y) * width_ + x;}

  double probability(int x, int y) const {return p_[index(x, y)];}
  double logodds(int x, int y) const {return l_[index(x, y)];}
  ClassId cls(int x, int y) const {return c_[index(x, y)];}
  bool occupied(int x, int y) const {return p_[index(x, y)] >= kOccupiedThreshold;}

  void set_probability(int x, int y, double p);
  void set_logodds(int x, int y, double l);
  void set_class(int x, int y, ClassId c) {c_[index(x, y)] = c;}

  std::span<const double> probabilities() const {return p_;}
  std::span<const double> logodds_plane() const {return l_;}
  std::span<const ClassId> classes() const {return c_;}

  std::size_t occupied_count() const;

  friend bool operator==(const SemanticOccupancyGrid &, const SemanticOccupancyGrid &) = default;

private:
  double resolution_{0.1};
  Point2 origin_;
  int width_{0};
  int height_{0};
  std::vector<double> p_;
  std::vector<double> l_;
  std::vector<ClassId> c_;
};

struct RasterizeOptions
{
  double resolution{0.1};
  double door_width{0.9};
  double p_occupied{0.95};
  double p_free{0.05};
};

/// Every cell containing a point of `a`-`b`, with half-open cell membership.
std::vector<CellIndex> segment_cells(const SemanticOccupancyGrid & grid, const Point2 & a, const Point2 & b);

/// Grid covering all room polygons plus a one-cell margin, aligned so that
/// coordinates at multiples of the resolution from the minimum fall on cell centers.
SemanticOccupancyGrid make_grid_for(const BuildingGraph & graph, double resolution, double p_init);

/// Walls become occupied cells carrying their material class; everything else
/// is free with class 0; door gaps are cleared. Throws GeometryError naming a
/// door whose gap vanishes at this resolution, InvalidArgument on resolution <= 0.
SemanticOccupancyGrid rasterize(const BuildingGraph & graph, const RasterizeOptions & options);
SemanticOccupancyGrid rasterize(const BuildingGraph & graph, double resolution);

/// Sets cells whose center lies inside `polygon` to occupied with class `cls`.
void fill_polygon(SemanticOccupancyGrid & grid, std::span<const Point2> polygon, double p, ClassId cls);

}  // namespace bimnav
