#pragma once

#include <string>
#include <vector>

#include "bimnav/grid.hpp"
#include "bimnav/grid_planner.hpp"
#include "bimnav/localization.hpp"
#include "bimnav/raycast.hpp"
#include "bimnav/uwb.hpp"

namespace bimnav::sim
{

inline constexpr double kMaxLinear = 0.5;
inline constexpr double kMaxAngular = 1.0;
inline constexpr double kDefaultDt = 0.1;

struct Anchor
{
  std::string id;
  Point3 position;
};

struct WorldState
{
  Pose2D true_pose;
  /// Ground truth, may hold obstacles the building model does not know about.
  SemanticOccupancyGrid grid;
  std::vector<Anchor> anchors;
  double time{0.0};
  /// Set by the last step when the motion was blocked.
  bool collision{false};
};

struct VelocityCommand
{
  double linear{0.0};
  double angular{0.0};

  friend bool operator==(const VelocityCommand &, const VelocityCommand &) = default;
};

/// Unicycle integration over dt in (0, 0.5]. The command is applied as given.
/// When the swept segment touches an occupied or out-of-grid cell the pose is
/// left unchanged and `collision` is set. Time always advances.
void step(WorldState & world, const VelocityCommand & cmd, double dt);

struct ScanConfig
{
  std::size_t beams{72};
  double angle_min{-3.14159265358979323846};
  /// 0 spreads the beams evenly over a full turn.
  double angle_increment{0.0};
  double range_max{8.0};
  double sigma{0.02};
  /// Classes the simulated sensor sees.
  ClassMask visible{full_mask()};
};

/// Ray casts every beam on the ground truth with `config.visible`, adds
/// Gaussian noise to hits and clamps to (0, range_max]. Misses are exactly range_max.
LaserScan simulate_scan(const WorldState & world, const ScanConfig & config, Rng & rng);

/// The true motion from `from` to `to` corrupted by the odometry noise
/// model with `noise`; the returned delta carries `filter_alphas`.
OdometryDelta simulate_odometry(
  const Pose2D & from, const Pose2D & to, const MotionNoise & noise, const MotionNoise & filter_alphas,
  Rng & rng);

/// One range per anchor from the tag at (x, y, tag_height), with Gaussian noise.
std::vector<uwb::RangeObservation> simulate_ranges(
  const WorldState & world, double tag_height, double sigma, Rng & rng);

struct FollowConfig
{
  double lookahead{0.4};
  double v_max{kMaxLinear};
  double w_max{kMaxAngular};
  double k_angular{2.0};
  /// Heading errors above this turn in place.
  double turn_in_place{1.0};
  double goal_tolerance{0.15};
  double stuck_timeout{10.0};
  double progress_epsilon{0.05};
};

/// Pure-pursuit tracker over a metric path.
class PathFollower
{
public:
  PathFollower() = default;
  PathFollower(MetricPath path, FollowConfig config = {});

  /// Next command for the pose estimate at time `t`. Zero once done or aborted.
  VelocityCommand command(const Pose2D & pose, double t);

  bool done() const {return done_;}
  bool aborted() const {return aborted_;}
  /// Index of the path point the tracker has progressed to.
  std::size_t progress_index() const {return progress_;}
  const MetricPath & path() const {return path_;}

private:
  MetricPath path_;
  FollowConfig config_;
  std::vector<double> arc_;  // cumulative length at each point
  std::size_t progress_{0};
  double best_progress_{0.0};
  double last_progress_time_{0.0};
  bool started_{false};
  bool done_{false};
  bool aborted_{false};
};

struct FollowResult
{
  std::vector<VelocityCommand> commands;
  bool arrived{false};
  bool aborted{false};
  int collisions{0};
};

/// Closed loop on the true pose until arrival, abort or `max_time`.
FollowResult follow_path(
  WorldState & world, const MetricPath & path, const FollowConfig & config = {},
  double dt = kDefaultDt, double max_time = 600.0);

}  // namespace bimnav::sim
