#include "bimnav/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bimnav/error.hpp"

namespace bimnav
{

namespace
{

double normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double sample_normal(Rng & rng, double stddev)
{
  if (stddev <= 0.0) {
    return 0.0;
  }
  std::normal_distribution<double> n(0.0, stddev);
  return n(rng);
}

}  // namespace

void BeamModelParams::validate() const
{
  const double w[] = {z_hit, z_short, z_max_w, z_rand};
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) {
      throw InvalidArgument("beam mixture weights must be non-negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("beam mixture weights must sum to 1");
  }
  if (!(sigma_hit > 0.0) || !(lambda_short > 0.0) || !(max_bin_width > 0.0)) {
    throw InvalidArgument("sigma_hit, lambda_short and max_bin_width must be positive");
  }
}

double beam_likelihood(double z, double z_star, double z_max, const BeamModelParams & p)
{
  z = std::clamp(z, 0.0, z_max);
  z_star = std::clamp(z_star, 0.0, z_max);
  double density = 0.0;

  if (p.z_hit > 0.0) {
    const double mass = normal_cdf((z_max - z_star) / p.sigma_hit) - normal_cdf(-z_star / p.sigma_hit);
    if (mass > 0.0) {
      const double u = (z - z_star) / p.sigma_hit;
      density += p.z_hit * std::exp(-0.5 * u * u) / (p.sigma_hit * std::sqrt(2.0 * std::numbers::pi) * mass);
    }
  }
  if (p.z_short > 0.0 && z_star > 0.0 && z <= z_star) {
    const double eta = 1.0 / (-std::expm1(-p.lambda_short * z_star));
    density += p.z_short * eta * p.lambda_short * std::exp(-p.lambda_short * z);
  }
  if (p.z_max_w > 0.0) {
    const double width = std::min(p.max_bin_width, z_max);
    if (z >= z_max - width) {
      density += p.z_max_w / width;
    }
  }
  if (p.z_rand > 0.0) {
    density += p.z_rand / z_max;
  }
  return std::max(density, std::numeric_limits<double>::min());
}

OdometryDelta odometry_between(const Pose2D & from, const Pose2D & to, const MotionNoise & alphas)
{
  OdometryDelta d;
  d.alphas = alphas;
  d.delta_trans = std::hypot(to.x - from.x, to.y - from.y);
  d.delta_rot1 = d.delta_trans < 1e-9 ?
    0.0 : normalize_angle(std::atan2(to.y - from.y, to.x - from.x) - from.theta);
  d.delta_rot2 = normalize_angle(to.theta - from.theta - d.delta_rot1);
  return d;
}

Pose2D apply_odometry(const Pose2D & pose, double rot1, double trans, double rot2)
{
  const double heading = pose.theta + rot1;
  return Pose2D(pose.x + trans * std::cos(heading), pose.y + trans * std::sin(heading), heading + rot2);
}

void motion_update(ParticleSet & particles, const OdometryDelta & d, Rng & rng)
{
  const MotionNoise & a = d.alphas;
  const double r1 = d.delta_rot1;
  const double t = d.delta_trans;
  const double r2 = d.delta_rot2;
  const double sd_rot1 = std::sqrt(a.a1 * r1 * r1 + a.a2 * t * t);
  const double sd_trans = std::sqrt(a.a3 * t * t + a.a4 * (r1 * r1 + r2 * r2));
  const double sd_rot2 = std::sqrt(a.a1 * r2 * r2 + a.a2 * t * t);
  for (auto & particle : particles) {
    const double rot1 = r1 - sample_normal(rng, sd_rot1);
    const double trans = t - sample_normal(rng, sd_trans);
    const double rot2 = r2 - sample_normal(rng, sd_rot2);
    particle.pose = apply_odometry(particle.pose, rot1, trans, rot2);
  }
}

void normalize_weights(ParticleSet & particles)
{
  double sum = 0.0;
  for (const auto & p : particles) {
    sum += p.weight;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    const double w = particles.empty() ? 0.0 : 1.0 / static_cast<double>(particles.size());
    for (auto & p : particles) {
      p.weight = w;
    }
    return;
  }
  for (auto & p : particles) {
    p.weight /= sum;
  }
}

MeasurementResult measurement_update(
  ParticleSet & particles, const LaserScan & scan, const SemanticOccupancyGrid & grid,
  const BeamModelParams & params, std::size_t beam_stride, Rng & rng)
{
  if (particles.empty()) {
    return {};
  }
  beam_stride = std::max<std::size_t>(beam_stride, 1);
  const double z_max = scan.range_max;

  std::vector<double> log_w(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const Pose2D & pose = particles[i].pose;
    double acc = particles[i].weight > 0.0 ? std::log(particles[i].weight) :
      -std::numeric_limits<double>::infinity();
    if (!grid.contains(pose.position())) {
      log_w[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    for (std::size_t k = 0; k < scan.ranges.size(); k += beam_stride) {
      const double z_star = raycast_semantic(grid, pose, scan.angle(k), z_max, params.sensor_class_mask);
      acc += std::log(beam_likelihood(scan.ranges[k], z_star, z_max, params));
    }
    log_w[i] = acc;
  }

  const double max_log = *std::max_element(log_w.begin(), log_w.end());
  if (!std::isfinite(max_log)) {
    particles = uniform_particles(grid, particles.size(), rng);
    return {true};
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    particles[i].weight = std::exp(log_w[i] - max_log);
    sum += particles[i].weight;
  }
  for (auto & p : particles) {
    p.weight /= sum;
  }
  return {};
}

double effective_sample_size(std::span<const Particle> particles)
{
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto & p : particles) {
    sum += p.weight;
    sum_sq += p.weight * p.weight;
  }
  return sum_sq > 0.0 ? sum * sum / sum_sq : 0.0;
}

ParticleSet systematic_resample(std::span<const Particle> particles, double offset)
{
  const std::size_t n = particles.size();
  ParticleSet out;
  out.reserve(n);
  if (n == 0) {
    return out;
  }
  double total = 0.0;
  for (const auto & p : particles) {
    total += p.weight;
  }
  const double step = 1.0 / static_cast<double>(n);
  const double w_uniform = step;
  double cumulative = particles[0].weight / total;
  std::size_t i = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const double u = offset + static_cast<double>(m) * step;
    while (u >= cumulative && i + 1 < n) {
      ++i;
      cumulative += particles[i].weight / total;
    }
    out.push_back({particles[i].pose, w_uniform});
  }
  return out;
}

ParticleSet systematic_resample(std::span<const Particle> particles, Rng & rng)
{
  const double step = particles.empty() ? 1.0 : 1.0 / static_cast<double>(particles.size());
  std::uniform_real_distribution<double> u(0.0, step);
  return systematic_resample(particles, u(rng));
}

bool resample(ParticleSet & particles, Rng & rng)
{
  if (effective_sample_size(particles) >= 0.5 * static_cast<double>(particles.size())) {
    return false;
  }
  particles = systematic_resample(particles, rng);
  return true;
}

PoseEstimate estimate_pose(std::span<const Particle> particles)
{
  if (particles.empty()) {
    throw InvalidArgument("estimate_pose: empty particle set");
  }
  double sw = 0.0;
  double x = 0.0;
  double y = 0.0;
  double c = 0.0;
  double s = 0.0;
  for (const auto & p : particles) {
    sw += p.weight;
    x += p.weight * p.pose.x;
    y += p.weight * p.pose.y;
    c += p.weight * std::cos(p.pose.theta);
    s += p.weight * std::sin(p.pose.theta);
  }
  if (!(sw > 0.0)) {
    throw InvalidArgument("estimate_pose: weights sum to zero");
  }
  PoseEstimate e;
  if (std::hypot(c, s) < 1e-12 * sw) {
    e.pose = Pose2D(x / sw, y / sw, particles.front().pose.theta);
    e.heading_ambiguous = true;
  } else {
    e.pose = Pose2D(x / sw, y / sw, std::atan2(s, c));
  }
  return e;
}

double particle_spread(std::span<const Particle> particles)
{
  if (particles.empty()) {
    return 0.0;
  }
  const Pose2D mean = estimate_pose(particles).pose;
  double sw = 0.0;
  double acc = 0.0;
  for (const auto & p : particles) {
    const double dx = p.pose.x - mean.x;
    const double dy = p.pose.y - mean.y;
    acc += p.weight * (dx * dx + dy * dy);
    sw += p.weight;
  }
  return std::sqrt(acc / sw);
}

namespace
{

std::vector<CellIndex> free_cells(const SemanticOccupancyGrid & grid, std::span<const Point2> region)
{
  std::vector<CellIndex> cells;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.occupied(x, y)) {
        continue;
      }
      if (!region.empty() && !point_in_polygon(region, grid.cell_center(x, y))) {
        continue;
      }
      cells.push_back({x, y});
    }
  }
  if (cells.empty()) {
    throw InvalidArgument("no free cells to place particles in");
  }
  return cells;
}

// Cells on the region boundary are only partly inside; retry a few times then use the center.
Point2 random_point_in(
  const SemanticOccupancyGrid & grid, const CellIndex & c, Rng & rng, std::span<const Point2> region)
{
  std::uniform_real_distribution<double> u(0.0, grid.resolution());
  const Point2 corner{
    grid.origin().x + c.x * grid.resolution(), grid.origin().y + c.y * grid.resolution()};
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double ox = u(rng);
    const double oy = u(rng);
    const Point2 p{corner.x + ox, corner.y + oy};
    if (region.empty() || point_in_polygon(region, p)) {
      return p;
    }
  }
  return grid.cell_center(c.x, c.y);
}

}  // namespace

ParticleSet uniform_particles(
  const SemanticOccupancyGrid & grid, std::size_t n, Rng & rng, std::span<const Point2> region)
{
  const auto cells = free_cells(grid, region);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::uniform_real_distribution<double> heading(-std::numbers::pi, std::numbers::pi);
  ParticleSet out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = random_point_in(grid, cells[pick(rng)], rng, region);
    const double h = heading(rng);
    out.push_back({Pose2D(p.x, p.y, h), 1.0 / static_cast<double>(n)});
  }
  return out;
}

ParticleSet particles_in_region(
  const SemanticOccupancyGrid & grid, std::span<const Point2> region, std::size_t n,
  double heading, double heading_sigma, Rng & rng)
{
  const auto cells = free_cells(grid, region);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  ParticleSet out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = random_point_in(grid, cells[pick(rng)], rng, region);
    const double h = heading + sample_normal(rng, heading_sigma);
    out.push_back({Pose2D(p.x, p.y, h), 1.0 / static_cast<double>(n)});
  }
  return out;
}

ParticleSet particles_around(
  const SemanticOccupancyGrid & grid, const Pose2D & pose, std::size_t n, double sigma_xy,
  double sigma_theta, Rng & rng)
{
  ParticleSet out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point2 p;
    for (int attempt = 0; attempt < 100; ++attempt) {
      p = {pose.x + sample_normal(rng, sigma_xy), pose.y + sample_normal(rng, sigma_xy)};
      const auto c = grid.cell_of(p);
      if (c && !grid.occupied(c->x, c->y)) {
        break;
      }
    }
    out.push_back({Pose2D(p.x, p.y, pose.theta + sample_normal(rng, sigma_theta)), 1.0 / static_cast<double>(n)});
  }
  return out;
}

}  // namespace bimnav
