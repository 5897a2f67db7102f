#include "bimnav/stack.hpp"

#include <cmath>
#include <limits>

#include "bimnav/error.hpp"
#include "bimnav/grid_planner.hpp"
#include "bimnav/raycast.hpp"
#include "bimnav/serialization.hpp"

namespace bimnav
{

namespace
{

Rng make_stream(std::uint64_t seed, std::uint32_t stream)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

/// Nearest cell center not in `blocked`, searching square rings out to `max_radius`.
Point2 snap_to_free(
  const SemanticOccupancyGrid & grid, const std::vector<std::uint8_t> & blocked, const Point2 & p,
  double max_radius)
{
  const auto c = grid.cell_of(p);
  if (!c) {
    throw BlockedError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") is outside the map");
  }
  if (!blocked[grid.index(c->x, c->y)]) {
    return p;
  }
  const int rings = static_cast<int>(std::ceil(max_radius / grid.resolution()));
  double best_d = std::numeric_limits<double>::infinity();
  std::optional<Point2> best;
  for (int r = 1; r <= rings && !best; ++r) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) {
          continue;
        }
        const int x = c->x + dx;
        const int y = c->y + dy;
        if (!grid.contains(x, y) || blocked[grid.index(x, y)]) {
          continue;
        }
        const Point2 q = grid.cell_center(x, y);
        const double d = distance(p, q);
        if (d < best_d) {
          best_d = d;
          best = q;
        }
      }
    }
  }
  if (!best || best_d > max_radius) {
    throw BlockedError("no free space near (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
  }
  return *best;
}

}  // namespace

std::string to_string(MissionState s)
{
  switch (s) {
    case MissionState::idle: return "idle";
    case MissionState::localizing: return "localizing";
    case MissionState::moving: return "moving";
    case MissionState::arrived: return "arrived";
    case MissionState::aborted: return "aborted";
  }
  return "unknown";
}

nlohmann::json to_json(const TelemetryEvent & e)
{
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto & w : e.warnings) {
    warnings.push_back(to_json(w));
  }
  return {
    {"seq", e.seq}, {"t", e.t}, {"state", to_string(e.state)}, {"mission", e.mission},
    {"true_pose", to_json(e.true_pose)}, {"estimate", to_json(e.estimate)}, {"spread", e.spread},
    {"waypoint_index", e.waypoint_index}, {"waypoint_count", e.waypoint_count},
    {"collision", e.collision}, {"filter_diverged", e.filter_diverged}, {"replanned", e.replanned},
    {"warnings", warnings}, {"map_version", e.map_version}};
}

nlohmann::json to_json(const MissionRecord & r)
{
  return {
    {"start", r.start}, {"goal", r.goal}, {"semantic", to_json(r.semantic)}, {"metric", to_json(r.metric)},
    {"arrived", r.arrived}, {"duration", r.duration}, {"collisions", r.collisions}, {"replans", r.replans}};
}

NavigationStack::NavigationStack(const Scenario & scenario)
: config_(scenario.config),
  start_time_(scenario.start_time),
  building_(scenario.building),
  weights_(scenario.weights),
  motion_rng_(make_stream(scenario.seed, 1)),
  sensor_rng_(make_stream(scenario.seed, 2)),
  filter_rng_(make_stream(scenario.seed, 3)),
  uwb_rng_(make_stream(scenario.seed, 4)),
  lidar_(lidar_mask(scenario.building))
{
  weights_.validate();
  belief_ = rasterize(building_, config_.resolution);
  world_.grid = belief_;
  for (const auto & o : scenario.obstacles) {
    fill_polygon(world_.grid, o.polygon, 0.95, o.material);
  }
  world_.anchors = scenario.anchors;
  world_.true_pose = scenario.initial_pose;
  const auto c = world_.grid.cell_of(world_.true_pose.position());
  if (!c || world_.grid.occupied(c->x, c->y)) {
    throw InvalidArgument("initial pose is not in free space");
  }

  config_.beam.sensor_class_mask = lidar_;
  config_.scan.visible = lidar_;
  config_.inverse_sensor.observable = lidar_;

  particles_ = particles_around(
    belief_, world_.true_pose, config_.particles, config_.init_sigma_xy, config_.init_sigma_theta, filter_rng_);
  estimate_ = estimate_pose(particles_);
  spread_ = particle_spread(particles_);
}

void NavigationStack::set_weights(const WeightConfig & cfg)
{
  cfg.validate();
  weights_ = cfg;
}

Timestamp NavigationStack::now() const
{
  return start_time_ + std::chrono::seconds(static_cast<long>(std::floor(world_.time)));
}

std::string NavigationStack::current_room() const
{
  const Point2 p = estimate_.pose.position();
  if (auto id = building_.room_at(p)) {
    return *id;
  }
  std::string best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto & [id, room] : building_.rooms()) {
    const double d = distance(room.center, p);
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

SemanticPath NavigationStack::plan_to(std::string_view goal) const
{
  return plan(building_, current_room(), goal, weights_, now());
}

MetricPath NavigationStack::route(
  const Pose2D & from, std::span<const Point2> waypoints, std::vector<std::size_t> & leg_ends) const
{
  const auto blocked = inflate(belief_, config_.inflation);
  const double snap_radius = config_.inflation + 3.0 * config_.resolution;
  MetricPath out;
  leg_ends.clear();
  Point2 cur = snap_to_free(belief_, blocked, from.position(), snap_radius);
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    MetricPath leg;
    try {
      const Point2 goal = snap_to_free(belief_, blocked, waypoints[i], snap_radius);
      leg = astar(belief_, blocked, cur, goal);
      cur = goal;
    } catch (const NoPathError & e) {
      throw NoPathError("waypoint " + std::to_string(i) + ": " + e.what());
    } catch (const BlockedError & e) {
      throw BlockedError("waypoint " + std::to_string(i) + ": " + e.what());
    }
    for (const auto & p : leg.points) {
      if (out.points.empty() || !(out.points.back() == p)) {
        out.points.push_back(p);
      }
    }
    leg_ends.push_back(out.points.empty() ? 0 : out.points.size() - 1);
  }
  if (out.points.size() <= 1) {
    out.points.clear();
  }
  out.length = polyline_length(out.points);
  return out;
}

void NavigationStack::start(const SemanticPath & path)
{
  if (busy()) {
    throw InvalidArgument("a mission is already in progress");
  }
  MetricPath metric = route(estimate_.pose, path.x_y_path, leg_ends_);
  path_ = path;
  follower_ = sim::PathFollower(std::move(metric), config_.follow);
  next_waypoint_ = 0;
  ticks_since_check_ = 0;
  replans_ = 0;
  collisions_ = 0;
  ++mission_index_;
  state_ = MissionState::moving;
  if (follower_.done()) {
    mark_arrived();
  }
}

void NavigationStack::mark_arrived()
{
  state_ = MissionState::arrived;
  building_ = replan_after_visit(building_, *path_, now());
}

void NavigationStack::stop()
{
  if (busy()) {
    state_ = MissionState::aborted;
    localize_ticks_left_ = 0;
  }
}

void NavigationStack::begin_localization(int ticks)
{
  if (busy()) {
    throw InvalidArgument("a mission is already in progress");
  }
  localize_ticks_left_ = ticks;
  state_ = ticks > 0 ? MissionState::localizing : MissionState::idle;
}

bool NavigationStack::route_blocked() const
{
  const auto & pts = follower_.path().points;
  const int reach = static_cast<int>(std::ceil(config_.inflation / belief_.resolution()));
  const double r2 = config_.inflation * config_.inflation + 1e-9;
  for (std::size_t i = follower_.progress_index(); i < pts.size(); ++i) {
    const auto c = belief_.cell_of(pts[i]);
    if (!c) {
      return true;
    }
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        const int x = c->x + dx;
        const int y = c->y + dy;
        if (!belief_.contains(x, y) || !belief_.occupied(x, y)) {
          continue;
        }
        const double d2 = (dx * dx + dy * dy) * belief_.resolution() * belief_.resolution();
        if (d2 <= r2) {
          return true;
        }
      }
    }
  }
  return false;
}

void NavigationStack::replan()
{
  std::size_t k = 0;
  while (k < leg_ends_.size() && leg_ends_[k] < follower_.progress_index()) {
    ++k;
  }
  const std::size_t first = next_waypoint_ + k;
  const auto & all = path_->x_y_path;
  if (first >= all.size()) {
    return;
  }
  std::vector<std::size_t> ends;
  MetricPath metric;
  try {
    metric = route(estimate_.pose, std::span<const Point2>(all).subspan(first), ends);
  } catch (const Error &) {
    return;  // keep the old route; the follower's stuck detection has the last word
  }
  leg_ends_ = std::move(ends);
  next_waypoint_ = first;
  follower_ = sim::PathFollower(std::move(metric), config_.follow);
  ++replans_;
}

TelemetryEvent NavigationStack::tick()
{
  TelemetryEvent ev;
  sim::VelocityCommand cmd;
  if (state_ == MissionState::localizing) {
    cmd.angular = config_.warmup_angular;
    if (--localize_ticks_left_ <= 0) {
      state_ = MissionState::idle;
    }
  } else if (state_ == MissionState::moving) {
    cmd = follower_.command(estimate_.pose, world_.time);
    if (follower_.done()) {
      mark_arrived();
    } else if (follower_.aborted()) {
      state_ = MissionState::aborted;
    }
  }

  const Pose2D before = world_.true_pose;
  sim::step(world_, cmd, config_.dt);
  collisions_ += world_.collision ? 1 : 0;

  const OdometryDelta odo =
    sim::simulate_odometry(before, world_.true_pose, config_.odometry_noise, config_.filter_alphas, motion_rng_);
  const bool moved = odo.delta_trans != 0.0 || odo.delta_rot1 != 0.0 || odo.delta_rot2 != 0.0;
  if (moved) {
    motion_update(particles_, odo, filter_rng_);
    const LaserScan scan = sim::simulate_scan(world_, config_.scan, sensor_rng_);
    ev.filter_diverged =
      measurement_update(particles_, scan, belief_, config_.beam, config_.beam_stride, filter_rng_).diverged;
    resample(particles_, filter_rng_);
    estimate_ = estimate_pose(particles_);
    spread_ = particle_spread(particles_);
    if (config_.merge_scans) {
      merge_scan_inplace(belief_, estimate_.pose, scan, config_.inverse_sensor);
      ++map_version_;
    }
  }

  if (moved) {
    for (auto o : sim::simulate_ranges(world_, config_.tag_height, config_.uwb_sigma, uwb_rng_)) {
      o.robot_position = {estimate_.pose.x, estimate_.pose.y, config_.tag_height};
      ranging_log_.push_back(std::move(o));
    }
  }

  if (state_ == MissionState::moving && config_.replan_period > 0 &&
    ++ticks_since_check_ >= config_.replan_period)
  {
    ticks_since_check_ = 0;
    if (route_blocked()) {
      const int before_replans = replans_;
      replan();
      ev.replanned = replans_ != before_replans;
    }
  }

  ev.seq = seq_++;
  ev.t = world_.time;
  ev.state = state_;
  ev.mission = mission_index_;
  ev.true_pose = world_.true_pose;
  ev.estimate = estimate_.pose;
  ev.spread = spread_;
  ev.collision = world_.collision;
  ev.map_version = map_version_;
  if (path_) {
    std::size_t k = 0;
    while (k < leg_ends_.size() && leg_ends_[k] < follower_.progress_index()) {
      ++k;
    }
    ev.waypoint_index = std::min(next_waypoint_ + k, path_->x_y_path.size());
    ev.waypoint_count = path_->x_y_path.size();
    ev.warnings = path_->warnings;
  }
  return ev;
}

MissionRecord NavigationStack::run_mission(
  std::string_view goal, const std::function<void(const TelemetryEvent &)> & sink)
{
  MissionRecord rec;
  rec.start = current_room();
  rec.goal = std::string(goal);
  rec.semantic = plan_to(goal);
  start(rec.semantic);
  rec.metric = follower_.path();
  const double t0 = world_.time;
  while (state_ == MissionState::moving) {
    if (world_.time - t0 >= config_.max_mission_time) {
      stop();
      break;
    }
    const TelemetryEvent ev = tick();
    if (sink) {
      sink(ev);
    }
  }
  rec.arrived = state_ == MissionState::arrived;
  rec.duration = world_.time - t0;
  rec.collisions = collisions_;
  rec.replans = replans_;
  return rec;
}

}  // namespace bimnav
