#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bimnav/scenario.hpp"
#include "bimnav/semantic_planner.hpp"

namespace bimnav
{

enum class MissionState { idle, localizing, moving, arrived, aborted };

std::string to_string(MissionState s);

/// One tick of the closed loop, as streamed to the console and written to logs.
struct TelemetryEvent
{
  std::uint64_t seq{0};
  double t{0.0};
  MissionState state{MissionState::idle};
  int mission{-1};
  Pose2D true_pose;
  Pose2D estimate;
  double spread{0.0};
  std::size_t waypoint_index{0};
  std::size_t waypoint_count{0};
  bool collision{false};
  bool filter_diverged{false};
  bool replanned{false};
  std::vector<PathWarning> warnings;
  std::uint64_t map_version{0};
};

nlohmann::json to_json(const TelemetryEvent & e);

struct MissionRecord
{
  std::string start;
  std::string goal;
  SemanticPath semantic;
  MetricPath metric;
  bool arrived{false};
  double duration{0.0};
  int collisions{0};
  int replans{0};
};

nlohmann::json to_json(const MissionRecord & r);

/// Simulator, particle filter, map merge and planners wired together. One
/// instance owns one world and is not thread safe; callers serialize access.
class NavigationStack
{
public:
  explicit NavigationStack(const Scenario & scenario);

  const BuildingGraph & building() const {return building_;}
  const WeightConfig & weights() const {return weights_;}
  void set_weights(const WeightConfig & cfg);

  /// Belief map: the rasterized building plus every merged scan.
  const SemanticOccupancyGrid & belief() const {return belief_;}
  std::uint64_t map_version() const {return map_version_;}
  const sim::WorldState & world() const {return world_;}
  const ParticleSet & particles() const {return particles_;}
  const PoseEstimate & estimate() const {return estimate_;}
  double spread() const {return spread_;}
  /// Wall clock of the simulated building: scenario start plus elapsed time.
  Timestamp now() const;

  /// Room containing the pose estimate, else the room with the nearest center.
  std::string current_room() const;

  /// Semantic plan from current_room() with the current weights.
  SemanticPath plan_to(std::string_view goal) const;

  /// Starts executing `path`. Throws BlockedError / NoPathError when the
  /// metric route cannot be built.
  void start(const SemanticPath & path);
  /// Aborts the running mission or warm-up.
  void stop();
  /// Turns in place for `ticks` ticks on the next calls to tick().
  void begin_localization(int ticks);

  MissionState state() const {return state_;}
  bool busy() const {return state_ == MissionState::moving || state_ == MissionState::localizing;}
  const std::optional<SemanticPath> & active_path() const {return path_;}
  const MetricPath & active_metric_path() const {return follower_.path();}

  /// Advances the world by one dt and runs the estimation loop. Reaching the
  /// goal marks every room of the path as scanned.
  TelemetryEvent tick();

  /// plan_to + start + tick until arrival, abort or the time limit.
  MissionRecord run_mission(std::string_view goal, const std::function<void(const TelemetryEvent &)> & sink = {});

  /// UWB ranges taken on every tick the robot moved, tagged with the
  /// estimated robot position.
  const std::vector<uwb::RangeObservation> & ranging_log() const {return ranging_log_;}

private:
  MetricPath route(const Pose2D & from, std::span<const Point2> waypoints, std::vector<std::size_t> & leg_ends) const;
  bool route_blocked() const;
  void replan();
  void mark_arrived();

  StackConfig config_;
  Timestamp start_time_;
  BuildingGraph building_;
  WeightConfig weights_;
  SemanticOccupancyGrid belief_;
  std::uint64_t map_version_{0};
  sim::WorldState world_;
  ParticleSet particles_;
  PoseEstimate estimate_;
  double spread_{0.0};
  Rng motion_rng_;
  Rng sensor_rng_;
  Rng filter_rng_;
  Rng uwb_rng_;
  ClassMask lidar_;

  MissionState state_{MissionState::idle};
  int mission_index_{-1};
  int localize_ticks_left_{0};
  std::optional<SemanticPath> path_;
  sim::PathFollower follower_;
  std::vector<std::size_t> leg_ends_;
  std::size_t next_waypoint_{0};
  std::uint64_t seq_{0};
  int ticks_since_check_{0};
  int replans_{0};
  int collisions_{0};

  std::vector<uwb::RangeObservation> ranging_log_;
};

}  // namespace bimnav
