#include "bimnav/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bimnav/error.hpp"

namespace bimnav::sim
{

namespace
{

double gaussian(Rng & rng, double sd)
{
  if (sd <= 0.0) {
    return 0.0;
  }
  return std::normal_distribution<double>(0.0, sd)(rng);
}

bool blocked(const SemanticOccupancyGrid & grid, const Point2 & a, const Point2 & b)
{
  if (!grid.contains(b)) {
    return true;
  }
  for (const CellIndex & c : segment_cells(grid, a, b)) {
    if (!grid.contains(c.x, c.y) || grid.occupied(c.x, c.y)) {
      return true;
    }
  }
  return false;
}

}  // namespace

void step(WorldState & world, const VelocityCommand & cmd, double dt)
{
  if (!(dt > 0.0 && dt <= 0.5)) {
    throw InvalidArgument("step: dt must be in (0, 0.5]");
  }
  const Pose2D & p = world.true_pose;
  double x = p.x;
  double y = p.y;
  const double th = p.theta;
  if (std::abs(cmd.angular) < 1e-9) {
    x += cmd.linear * dt * std::cos(th);
    y += cmd.linear * dt * std::sin(th);
  } else {
    const double r = cmd.linear / cmd.angular;
    x += r * (std::sin(th + cmd.angular * dt) - std::sin(th));
    y += r * (std::cos(th) - std::cos(th + cmd.angular * dt));
  }
  world.time += dt;
  const Pose2D next(x, y, th + cmd.angular * dt);
  if (next.position() != p.position() && blocked(world.grid, p.position(), next.position())) {
    world.collision = true;
    return;
  }
  world.collision = false;
  world.true_pose = next;
}

LaserScan simulate_scan(const WorldState & world, const ScanConfig & config, Rng & rng)
{
  LaserScan scan;
  scan.angle_min = config.angle_min;
  scan.angle_increment = config.angle_increment != 0.0 ?
    config.angle_increment : 2.0 * std::numbers::pi / static_cast<double>(config.beams);
  scan.range_max = config.range_max;
  scan.ranges.resize(config.beams);
  for (std::size_t k = 0; k < config.beams; ++k) {
    const double z = raycast_semantic(world.grid, world.true_pose, scan.angle(k), config.range_max, config.visible);
    if (z >= config.range_max) {
      scan.ranges[k] = config.range_max;
      continue;
    }
    scan.ranges[k] = std::clamp(z + gaussian(rng, config.sigma), 1e-3, config.range_max);
  }
  return scan;
}

OdometryDelta simulate_odometry(
  const Pose2D & from, const Pose2D & to, const MotionNoise & noise, const MotionNoise & filter_alphas,
  Rng & rng)
{
  OdometryDelta d = odometry_between(from, to, filter_alphas);
  const double r1 = d.delta_rot1;
  const double t = d.delta_trans;
  const double r2 = d.delta_rot2;
  d.delta_rot1 = r1 + gaussian(rng, std::sqrt(noise.a1 * r1 * r1 + noise.a2 * t * t));
  d.delta_trans = t + gaussian(rng, std::sqrt(noise.a3 * t * t + noise.a4 * (r1 * r1 + r2 * r2)));
  d.delta_rot2 = r2 + gaussian(rng, std::sqrt(noise.a1 * r2 * r2 + noise.a2 * t * t));
  return d;
}

std::vector<uwb::RangeObservation> simulate_ranges(
  const WorldState & world, double tag_height, double sigma, Rng & rng)
{
  std::vector<uwb::RangeObservation> out;
  out.reserve(world.anchors.size());
  const Point3 tag{world.true_pose.x, world.true_pose.y, tag_height};
  for (const auto & a : world.anchors) {
    const double r = distance(a.position, tag) + gaussian(rng, sigma);
    out.push_back({a.id, tag, std::max(r, 1e-3), world.time});
  }
  return out;
}

PathFollower::PathFollower(MetricPath path, FollowConfig config)
: path_(std::move(path)), config_(config)
{
  arc_.resize(path_.points.size(), 0.0);
  for (std::size_t i = 1; i < path_.points.size(); ++i) {
    arc_[i] = arc_[i - 1] + distance(path_.points[i - 1], path_.points[i]);
  }
  done_ = path_.points.empty();
}

VelocityCommand PathFollower::command(const Pose2D & pose, double t)
{
  if (done_ || aborted_) {
    return {};
  }
  if (!started_) {
    started_ = true;
    last_progress_time_ = t;
  }
  const auto & pts = path_.points;
  const Point2 here = pose.position();

  // Nearest point in a short window ahead of the current progress.
  const double window_end = arc_[progress_] + 4.0 * config_.lookahead + 1.0;
  std::size_t best = progress_;
  double best_d = distance(here, pts[progress_]);
  for (std::size_t i = progress_ + 1; i < pts.size() && arc_[i] <= window_end; ++i) {
    const double d = distance(here, pts[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  progress_ = best;

  const double to_goal = distance(here, pts.back());
  if (to_goal <= config_.goal_tolerance && arc_.back() - arc_[progress_] <= config_.lookahead + config_.goal_tolerance) {
    done_ = true;
    return {};
  }

  const double progress = std::max(arc_[progress_], arc_.back() - to_goal);
  if (progress > best_progress_ + config_.progress_epsilon) {
    best_progress_ = progress;
    last_progress_time_ = t;
  }
  if (t - last_progress_time_ > config_.stuck_timeout) {
    aborted_ = true;
    return {};
  }

  std::size_t target = std::min(progress_ + 1, pts.size() - 1);
  while (target + 1 < pts.size() && distance(here, pts[target]) < config_.lookahead) {
    ++target;
  }
  const Point2 aim = pts[target];
  const double alpha = normalize_angle(std::atan2(aim.y - here.y, aim.x - here.x) - pose.theta);
  VelocityCommand cmd;
  cmd.angular = std::clamp(config_.k_angular * alpha, -config_.w_max, config_.w_max);
  if (std::abs(alpha) > config_.turn_in_place) {
    return cmd;
  }
  cmd.linear = std::min(config_.v_max, std::max(to_goal, 0.1)) * std::cos(alpha);
  cmd.linear = std::clamp(cmd.linear, 0.0, config_.v_max);
  return cmd;
}

FollowResult follow_path(
  WorldState & world, const MetricPath & path, const FollowConfig & config, double dt, double max_time)
{
  FollowResult result;
  PathFollower follower(path, config);
  const double t_end = world.time + max_time;
  while (world.time < t_end) {
    const VelocityCommand cmd = follower.command(world.true_pose, world.time);
    if (follower.done()) {
      result.arrived = true;
      break;
    }
    if (follower.aborted()) {
      result.aborted = true;
      break;
    }
    result.commands.push_back(cmd);
    step(world, cmd, dt);
    result.collisions += world.collision ? 1 : 0;
  }
  return result;
}

}  // namespace bimnav::sim
