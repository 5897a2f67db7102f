#include "bimnav/uwb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace bimnav::uwb
{

namespace
{

double predicted_range(const RangeObservation & o, const Point2 & x, double z_a)
{
  return distance(Point3{x.x, x.y, z_a}, o.robot_position);
}

struct Linearization
{
  Eigen::Matrix2d jtj{Eigen::Matrix2d::Zero()};
  Eigen::Vector2d jtf{Eigen::Vector2d::Zero()};
};

Linearization linearize(std::span<const RangeObservation> obs, const Point2 & x, double z_a)
{
  Linearization lin;
  for (const auto & o : obs) {
    const double d = predicted_range(o, x, z_a);
    if (d < 1e-12) {
      continue;
    }
    const double f = d - o.range;
    const Eigen::Vector2d j((x.x - o.robot_position.x) / d, (x.y - o.robot_position.y) / d);
    lin.jtj += j * j.transpose();
    lin.jtf += j * f;
  }
  return lin;
}

/// Minimizes g.p + p.B.p / 2 subject to |p| <= radius for a 2x2 PSD B.
Eigen::Vector2d trust_region_step(const Eigen::Matrix2d & b, const Eigen::Vector2d & g, double radius)
{
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(b);
  const Eigen::Vector2d lambda = eig.eigenvalues();
  const Eigen::Matrix2d q = eig.eigenvectors();
  const Eigen::Vector2d qg = q.transpose() * g;
  const double tiny = 1e-14 * std::max(1.0, lambda.cwiseAbs().maxCoeff());

  auto step_for = [&](double mu) {
      Eigen::Vector2d coeff;
      for (int i = 0; i < 2; ++i) {
        const double denom = lambda[i] + mu;
        coeff[i] = denom > tiny ? -qg[i] / denom : 0.0;
      }
      return Eigen::Vector2d(q * coeff);
    };

  const Eigen::Vector2d newton = step_for(0.0);
  const bool singular_direction = lambda[0] <= tiny && std::abs(qg[0]) > tiny;
  if (!singular_direction && newton.norm() <= radius) {
    return newton;
  }
  double lo = std::max(0.0, -lambda[0]);
  double hi = lo + g.norm() / radius + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (step_for(mid).norm() > radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return step_for(hi);
}

}  // namespace

std::vector<RangeObservation> select_observations(
  std::span<const RangeObservation> stream, double min_spacing, std::size_t target)
{
  std::vector<RangeObservation> kept;
  for (const auto & o : stream) {
    if (kept.size() >= target) {
      break;
    }
    if (kept.empty()) {
      kept.push_back(o);
      continue;
    }
    const Point3 & last = kept.back().robot_position;
    const double d = std::hypot(o.robot_position.x - last.x, o.robot_position.y - last.y);
    if (d >= min_spacing - 1e-9) {
      kept.push_back(o);
    }
  }
  return kept;
}

double colinearity_score(std::span<const RangeObservation> obs)
{
  if (obs.size() < 3) {
    throw InvalidArgument("colinearity check needs at least 3 observations");
  }
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(obs.size()), 2);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = obs[i].robot_position.x;
    m(static_cast<Eigen::Index>(i), 1) = obs[i].robot_position.y;
  }
  m.rowwise() -= m.colwise().mean();
  const Eigen::JacobiSVD<Eigen::MatrixX2d> svd(m);
  const auto s = svd.singularValues();
  if (!(s[0] > 0.0)) {
    return 0.0;
  }
  return s[1] / s[0];
}

Point2 trilaterate(std::span<const RangeObservation> obs, double z_a)
{
  if (obs.size() < 3) {
    throw InvalidArgument("trilateration needs at least 3 observations");
  }
  const double score = colinearity_score(obs);
  if (score < kColinearityThreshold) {
    throw ColinearError(score);
  }
  const auto n = static_cast<Eigen::Index>(obs.size()) - 1;
  const RangeObservation & ref = obs.back();
  const double xn = ref.robot_position.x;
  const double yn = ref.robot_position.y;
  const double zn = ref.robot_position.z;
  Eigen::MatrixX2d a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto & o = obs[static_cast<std::size_t>(i)];
    const double xi = o.robot_position.x;
    const double yi = o.robot_position.y;
    const double zi = o.robot_position.z;
    a(i, 0) = 2.0 * (xn - xi);
    a(i, 1) = 2.0 * (yn - yi);
    b(i) = o.range * o.range - ref.range * ref.range - xi * xi - yi * yi - zi * zi +
      xn * xn + yn * yn + zn * zn - 2.0 * z_a * (zn - zi);
  }
  // Same minimizer as the normal equations, better conditioned.
  const Eigen::Vector2d x = a.colPivHouseholderQr().solve(b);
  if (!x.allFinite()) {
    throw ColinearError(score);
  }
  return {x[0], x[1]};
}

double range_residual_l1(std::span<const RangeObservation> obs, const Point2 & x, double z_a)
{
  double acc = 0.0;
  for (const auto & o : obs) {
    acc += std::abs(o.range - predicted_range(o, x, z_a));
  }
  return acc;
}

double range_cost_l2(std::span<const RangeObservation> obs, const Point2 & x, double z_a)
{
  double acc = 0.0;
  for (const auto & o : obs) {
    const double f = predicted_range(o, x, z_a) - o.range;
    acc += f * f;
  }
  return 0.5 * acc;
}

AnchorEstimate refine(
  std::span<const RangeObservation> obs, const Point2 & initial, double z_a,
  const RefineOptions & options)
{
  if (obs.empty()) {
    throw InvalidArgument("refine needs observations");
  }
  // Feasible box: robot positions padded by the largest range.
  double max_range = 0.0;
  Eigen::Vector2d lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto & o : obs) {
    max_range = std::max(max_range, o.range);
    lo = lo.cwiseMin(Eigen::Vector2d(o.robot_position.x, o.robot_position.y));
    hi = hi.cwiseMax(Eigen::Vector2d(o.robot_position.x, o.robot_position.y));
  }
  lo.array() -= max_range + 1.0;
  hi.array() += max_range + 1.0;

  Eigen::Vector2d x(initial.x, initial.y);
  x = x.cwiseMax(lo).cwiseMin(hi);
  auto as_point = [](const Eigen::Vector2d & v) {return Point2{v[0], v[1]};};

  double cost = range_cost_l2(obs, as_point(x), z_a);
  double l1 = range_residual_l1(obs, as_point(x), z_a);
  double radius = options.initial_radius;

  AnchorEstimate est;
  est.z_a = z_a;
  est.n_obs = obs.size();
  est.converged = false;

  for (int it = 0; it < options.max_iterations; ++it) {
    est.iterations = it;
    const Linearization lin = linearize(obs, as_point(x), z_a);
    if (lin.jtf.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance * std::max(1.0, cost) ||
      cost < 1e-30)
    {
      est.converged = true;
      break;
    }
    const Eigen::Vector2d p = trust_region_step(lin.jtj, lin.jtf, radius);

    // Reflect components that leave the box back inside it.
    Eigen::Vector2d trial = x + p;
    for (int i = 0; i < 2; ++i) {
      if (trial[i] > hi[i]) {
        trial[i] = hi[i] - (trial[i] - hi[i]);
      } else if (trial[i] < lo[i]) {
        trial[i] = lo[i] + (lo[i] - trial[i]);
      }
      trial[i] = std::clamp(trial[i], lo[i], hi[i]);
    }
    const Eigen::Vector2d step = trial - x;
    const double predicted = -(lin.jtf.dot(step) + 0.5 * step.dot(lin.jtj * step));
    const double trial_cost = range_cost_l2(obs, as_point(trial), z_a);
    const double trial_l1 = range_residual_l1(obs, as_point(trial), z_a);
    const double rho = predicted > 0.0 ? (cost - trial_cost) / predicted : -1.0;

    if (rho > 1e-4 && trial_l1 <= l1) {
      x = trial;
      cost = trial_cost;
      l1 = trial_l1;
      if (rho > 0.75 && step.norm() > 0.99 * radius) {
        radius = std::min(2.0 * radius, 1e3);
      }
      if (step.norm() <= options.step_tolerance * (1.0 + x.norm())) {
        est.converged = true;
        break;
      }
    } else {
      radius = 0.25 * std::min(radius, std::max(step.norm(), 1e-300));
      if (radius <= options.step_tolerance * (1.0 + x.norm())) {
        est.converged = true;
        break;
      }
    }
    if (rho > 0.0 && rho < 0.25) {
      radius *= 0.25;
    }
  }
  est.position = as_point(x);
  est.residual = l1;
  return est;
}

AnchorEstimate locate_anchor(
  std::span<const RangeObservation> stream, double z_a, double min_spacing, std::size_t target)
{
  const auto selected = select_observations(stream, min_spacing, target);
  if (selected.size() < 3) {
    throw InvalidArgument(
            "only " + std::to_string(selected.size()) + " observations survive the spacing filter");
  }
  const double score = colinearity_score(selected);
  const Point2 initial = trilaterate(selected, z_a);
  AnchorEstimate est = refine(selected, initial, z_a);
  est.anchor_id = selected.front().anchor_id;
  est.colinearity_score = score;
  return est;
}

LocalizationErrorReport error_report(std::span<const Point2> estimates, std::span<const Point2> truths)
{
  if (estimates.size() != truths.size()) {
    throw InvalidArgument("error_report: size mismatch");
  }
  LocalizationErrorReport r;
  r.count = estimates.size();
  if (estimates.empty()) {
    return r;
  }
  auto stats = [&](auto err) {
      ErrorStats s{0.0, std::numeric_limits<double>::infinity(), 0.0};
      for (std::size_t i = 0; i < estimates.size(); ++i) {
        const double e = err(estimates[i], truths[i]);
        s.mean += e;
        s.min = std::min(s.min, e);
        s.max = std::max(s.max, e);
      }
      s.mean /= static_cast<double>(estimates.size());
      return s;
    };
  r.x = stats([](const Point2 & e, const Point2 & t) {return std::abs(e.x - t.x);});
  r.y = stats([](const Point2 & e, const Point2 & t) {return std::abs(e.y - t.y);});
  r.planar = stats([](const Point2 & e, const Point2 & t) {return distance(e, t);});
  return r;
}

}  // namespace bimnav::uwb
