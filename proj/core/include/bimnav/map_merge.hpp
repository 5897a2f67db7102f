#pragma once

#include "bimnav/grid.hpp"
#include "bimnav/localization.hpp"

namespace bimnav
{

/// Log-odds increments of the inverse sensor model.
struct InverseSensorParams
{
  double l_occ{0.85};
  double l_free{-0.4};
  double l_min{-5.0};
  double l_max{5.0};
  /// Cells whose class is outside this mask are invisible to the sensor and
  /// are left alone (a lidar ray passing a glass wall says nothing about it).
  ClassMask observable{full_mask()};
};

/// Adds one scan to the log-odds plane. Per beam, the cells the ray crosses
/// before its endpoint get l_free and the endpoint cell gets l_occ when the
/// range is below range_max (max-range beams free every cell they cross).
/// Each cell is updated at most once per scan, occupied winning over free.
/// Results are clamped to [l_min, l_max]; the class plane is never written.
/// Cells with a nonzero class outside `model.observable` are skipped.
/// Throws InvalidArgument when the pose is outside the grid.
void merge_scan_inplace(
  SemanticOccupancyGrid & grid, const Pose2D & pose, const LaserScan & scan,
  const InverseSensorParams & model = {});

SemanticOccupancyGrid merge_scan(
  SemanticOccupancyGrid grid, const Pose2D & pose, const LaserScan & scan,
  const InverseSensorParams & model = {});

}  // namespace bimnav
