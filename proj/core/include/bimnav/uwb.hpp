#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bimnav/error.hpp"
#include "bimnav/geometry.hpp"

namespace bimnav::uwb
{

inline constexpr double kDefaultTagHeight = 0.78;
inline constexpr double kMinSpacing = 0.10;
inline constexpr std::size_t kTargetObservations = 70;
inline constexpr double kColinearityThreshold = 0.05;

/// One range between the robot's tag and a static anchor.
struct RangeObservation
{
  std::string anchor_id;
  Point3 robot_position;
  double range{0.0};
  double t{0.0};
};

struct AnchorEstimate
{
  std::string anchor_id;
  Point2 position;
  double z_a{0.0};
  /// Sum of absolute range residuals at `position`.
  double residual{0.0};
  std::size_t n_obs{0};
  double colinearity_score{0.0};
  bool converged{true};
  int iterations{0};
};

/// Trilateration refused because the robot positions are nearly colinear.
class ColinearError : public Error
{
public:
  explicit ColinearError(double score)
  : Error("robot positions are colinear (score " + std::to_string(score) + ")"), score_(score) {}

  double score() const {return score_;}

private:
  double score_;
};

/// Greedy pass in time order: an observation is kept when its planar distance
/// to the previously kept one is at least `min_spacing` (1e-9 slack). Stops at `target`.
std::vector<RangeObservation> select_observations(
  std::span<const RangeObservation> stream, double min_spacing = kMinSpacing,
  std::size_t target = kTargetObservations);

/// Smaller over larger singular value of the mean-centered planar robot
/// positions: 0 on a line, 1 for isotropic spread. Throws InvalidArgument
/// for fewer than 3 observations.
double colinearity_score(std::span<const RangeObservation> obs);

/// Linearized least-squares position, differencing every range equation
/// against the last observation. Throws ColinearError when the score is below
/// kColinearityThreshold, InvalidArgument for fewer than 3 observations.
Point2 trilaterate(std::span<const RangeObservation> obs, double z_a);

/// Sum of |r_i - ||x - robot_i|||, with the anchor at height z_a.
double range_residual_l1(std::span<const RangeObservation> obs, const Point2 & x, double z_a);
/// Half the sum of squared range residuals.
double range_cost_l2(std::span<const RangeObservation> obs, const Point2 & x, double z_a);

struct RefineOptions
{
  int max_iterations{100};
  double initial_radius{1.0};
  double gradient_tolerance{1e-12};
  double step_tolerance{1e-12};
};

/// Bounded trust-region refinement of the squared range residuals. A step is
/// accepted only when it also does not raise the L1 residual, so the result is
/// never worse than `initial` on that measure. Steps leaving the bounding box
/// of the observations (padded by the largest range) are reflected back in.
AnchorEstimate refine(
  std::span<const RangeObservation> obs, const Point2 & initial, double z_a,
  const RefineOptions & options = {});

/// select_observations + colinearity check + trilaterate + refine.
AnchorEstimate locate_anchor(
  std::span<const RangeObservation> stream, double z_a, double min_spacing = kMinSpacing,
  std::size_t target = kTargetObservations);

struct ErrorStats
{
  double mean{0.0};
  double min{0.0};
  double max{0.0};
};

/// Absolute error statistics over x, y and planar distance.
struct LocalizationErrorReport
{
  ErrorStats x;
  ErrorStats y;
  ErrorStats planar;
  std::size_t count{0};
};

LocalizationErrorReport error_report(std::span<const Point2> estimates, std::span<const Point2> truths);

}  // namespace bimnav::uwb
