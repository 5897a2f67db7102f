#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "bimnav/grid.hpp"
#include "bimnav/raycast.hpp"

namespace bimnav
{

using Rng = std::mt19937_64;

struct Particle
{
  Pose2D pose;
  double weight{0.0};
};

using ParticleSet = std::vector<Particle>;

struct LaserScan
{
  double angle_min{0.0};
  double angle_increment{0.0};
  std::vector<double> ranges;
  double range_max{10.0};

  double angle(std::size_t k) const {return angle_min + static_cast<double>(k) * angle_increment;}
};

/// Four-density beam model: hit (truncated Gaussian), short (truncated
/// exponential), max (narrow uniform at range_max), rand (uniform).
struct BeamModelParams
{
  double z_hit{0.8};
  double z_short{0.05};
  double z_max_w{0.05};
  double z_rand{0.10};
  double sigma_hit{0.1};
  double lambda_short{1.0};
  /// Width of the max-range bin that carries the z_max_w mass.
  double max_bin_width{0.05};
  ClassMask sensor_class_mask{full_mask()};

  void validate() const;
};

struct MotionNoise
{
  double a1{0.0};  // rotation from rotation
  double a2{0.0};  // rotation from translation
  double a3{0.0};  // translation from translation
  double a4{0.0};  // translation from rotation
};

/// Odometry as rotate / translate / rotate.
struct OdometryDelta
{
  double delta_rot1{0.0};
  double delta_trans{0.0};
  double delta_rot2{0.0};
  MotionNoise alphas;
};

/// Decomposes the motion between two poses into an OdometryDelta.
OdometryDelta odometry_between(const Pose2D & from, const Pose2D & to, const MotionNoise & alphas = {});
/// Applies a noise-free odometry delta.
Pose2D apply_odometry(const Pose2D & pose, double rot1, double trans, double rot2);

/// Density of measuring `z` when the ray cast predicts `z_star`; normalized over [0, z_max].
double beam_likelihood(double z, double z_star, double z_max, const BeamModelParams & params);

struct MeasurementResult
{
  bool diverged{false};
};

/// Multiplies each weight by the product of beam likelihoods over every
/// `beam_stride`-th beam (accumulated in log space) and renormalizes. When no
/// particle keeps a positive weight the set is re-drawn uniformly over free
/// space and `diverged` is set.
MeasurementResult measurement_update(
  ParticleSet & particles, const LaserScan & scan, const SemanticOccupancyGrid & grid,
  const BeamModelParams & params, std::size_t beam_stride, Rng & rng);

/// Samples each pose through the odometry motion model.
void motion_update(ParticleSet & particles, const OdometryDelta & delta, Rng & rng);

double effective_sample_size(std::span<const Particle> particles);

/// Low-variance systematic resampling with the given offset in [0, 1/N).
ParticleSet systematic_resample(std::span<const Particle> particles, double offset);
ParticleSet systematic_resample(std::span<const Particle> particles, Rng & rng);

/// Resamples only when the effective sample size drops below N/2. Returns
/// whether it did.
bool resample(ParticleSet & particles, Rng & rng);

struct PoseEstimate
{
  Pose2D pose;
  /// Set when the heading vectors cancel and the first particle's heading is used.
  bool heading_ambiguous{false};
};

/// Weighted mean position and circular mean heading. Throws InvalidArgument on an empty set.
PoseEstimate estimate_pose(std::span<const Particle> particles);

/// Weighted RMS distance of particles from the estimate.
double particle_spread(std::span<const Particle> particles);

void normalize_weights(ParticleSet & particles);

/// Particles uniform over free cells (inside `region` when it is non-empty),
/// uniform heading.
ParticleSet uniform_particles(
  const SemanticOccupancyGrid & grid, std::size_t n, Rng & rng, std::span<const Point2> region = {});

/// Particles uniform over free cells inside `region` with heading drawn from
/// N(heading, heading_sigma).
ParticleSet particles_in_region(
  const SemanticOccupancyGrid & grid, std::span<const Point2> region, std::size_t n,
  double heading, double heading_sigma, Rng & rng);

/// Gaussian cloud around `pose`; draws landing outside free space are redrawn
/// (after 100 tries the draw is kept as is).
ParticleSet particles_around(
  const SemanticOccupancyGrid & grid, const Pose2D & pose, std::size_t n, double sigma_xy,
  double sigma_theta, Rng & rng);

}  // namespace bimnav
