#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bimnav/building.hpp"
#include "bimnav/localization.hpp"
#include "bimnav/map_merge.hpp"
#include "bimnav/simulator.hpp"

namespace bimnav
{

/// Ground-truth obstacle the building model does not contain.
struct ObstacleSpec
{
  Polygon polygon;
  ClassId material{kUnknownClass};
};

struct StackConfig
{
  double resolution{0.1};
  double dt{sim::kDefaultDt};
  double inflation{kDefaultInflation};
  std::size_t particles{400};
  std::size_t beam_stride{2};
  double init_sigma_xy{0.2};
  double init_sigma_theta{0.1};
  /// Ticks spent turning in place before the first mission.
  int warmup_ticks{30};
  double warmup_angular{0.5};
  sim::ScanConfig scan{};
  BeamModelParams beam{};
  MotionNoise odometry_noise{0.002, 0.002, 0.002, 0.002};
  MotionNoise filter_alphas{0.01, 0.01, 0.01, 0.01};
  InverseSensorParams inverse_sensor{};
  bool merge_scans{true};
  /// Ticks between checks of the remaining path against the merged map.
  int replan_period{10};
  double uwb_sigma{0.1};
  double tag_height{uwb::kDefaultTagHeight};
  double max_mission_time{300.0};
  sim::FollowConfig follow{};
};

struct Scenario
{
  std::filesystem::path building_path;
  BuildingGraph building;
  Timestamp start_time;
  Pose2D initial_pose;
  std::vector<sim::Anchor> anchors;
  std::vector<ObstacleSpec> obstacles;
  std::vector<std::string> missions;
  std::uint64_t seed{0};
  WeightConfig weights;
  StackConfig config;
};

/// Parses a scenario document; a relative building path is resolved against
/// `base_dir`. Throws ParseError, ReferenceError, InvalidArgument.
Scenario load_scenario(std::string_view document, const std::filesystem::path & base_dir);
Scenario load_scenario_file(const std::filesystem::path & path);

}  // namespace bimnav
