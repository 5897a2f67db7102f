#include <gtest/gtest.h>

#include <random>

#include "bimnav/error.hpp"
#include "bimnav/simulator.hpp"
#include "oracles.hpp"

using namespace bimnav;
using namespace bimnav::sim;

namespace
{

WorldState open_world()
{
  WorldState w;
  w.grid = SemanticOccupancyGrid(0.1, {0, 0}, 100, 100, 0.05);
  w.true_pose = Pose2D(5, 5, 0);
  return w;
}

}  // namespace

TEST(Step, StraightAndArc)
{
  auto w = open_world();
  step(w, {0.5, 0.0}, 0.2);
  EXPECT_NEAR(w.true_pose.x, 5.1, 1e-12);
  EXPECT_NEAR(w.time, 0.2, 1e-12);
  EXPECT_FALSE(w.collision);

  // a quarter circle of radius 1
  auto v = open_world();
  for (int i = 0; i < 10; ++i) {
    step(v, {std::numbers::pi / 2 / 5.0 * 1.0, std::numbers::pi / 2 / 5.0}, 0.5);
  }
  EXPECT_NEAR(v.true_pose.x, 6.0, 1e-9);
  EXPECT_NEAR(v.true_pose.y, 6.0, 1e-9);
  EXPECT_NEAR(v.true_pose.theta, std::numbers::pi / 2, 1e-9);
}

TEST(Step, RotateInPlace)
{
  auto w = open_world();
  step(w, {0.0, 1.0}, 0.5);
  EXPECT_EQ(w.true_pose.x, 5.0);
  EXPECT_NEAR(w.true_pose.theta, 0.5, 1e-12);
}

TEST(Step, CollisionLeavesPose)
{
  auto w = open_world();
  for (int y = 0; y < 100; ++y) {
    w.grid.set_probability(52, y, 0.95);
  }
  const Pose2D before = w.true_pose;
  step(w, {0.5, 0.0}, 0.5);
  EXPECT_TRUE(w.collision);
  EXPECT_EQ(w.true_pose, before);
  EXPECT_NEAR(w.time, 0.5, 1e-12);
  step(w, {-0.5, 0.0}, 0.5);
  EXPECT_FALSE(w.collision);
  EXPECT_THROW(step(w, {}, 0.0), InvalidArgument);
  EXPECT_THROW(step(w, {}, 0.6), InvalidArgument);
}

TEST(Step, LeavingTheGridCollides)
{
  auto w = open_world();
  w.true_pose = Pose2D(0.05, 5, std::numbers::pi);
  step(w, {0.5, 0.0}, 0.5);
  EXPECT_TRUE(w.collision);
}

TEST(Scan, NoiseAndMisses)
{
  auto w = open_world();
  for (int y = 0; y < 100; ++y) {
    w.grid.set_probability(80, y, 0.95);
  }
  ScanConfig c;
  c.beams = 4;
  c.angle_min = 0.0;
  c.sigma = 0.0;
  Rng rng(1);
  auto s = simulate_scan(w, c, rng);
  ASSERT_EQ(s.ranges.size(), 4u);
  EXPECT_NEAR(s.angle_increment, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(s.ranges[0], 3.05 - 0.0, 0.051);
  EXPECT_EQ(s.ranges[1], 8.0);
  EXPECT_EQ(s.ranges[2], 8.0);

  c.sigma = 0.02;
  c.beams = 1;
  double m = 0;
  double v = 0;
  const double truth = simulate_scan(w, ScanConfig{1, 0.0, 0.0, 8.0, 0.0, full_mask()}, rng).ranges[0];
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    const double z = simulate_scan(w, c, rng).ranges[0];
    m += z;
    v += (z - truth) * (z - truth);
  }
  EXPECT_NEAR(m / n, truth, 0.002);
  EXPECT_NEAR(std::sqrt(v / n), 0.02, 0.002);
}

TEST(Scan, GlassInvisible)
{
  const auto b = load_building_file(oracle::fixture("fixture_building.json"));
  WorldState w;
  w.grid = rasterize(b, 0.1);
  w.true_pose = Pose2D(14.05, 5.05, 0.0);
  ScanConfig c;
  c.beams = 1;
  c.angle_min = 0.0;
  c.visible = lidar_mask(b);
  Rng rng(1);
  EXPECT_EQ(simulate_scan(w, c, rng).ranges[0], 8.0);
}

TEST(Odometry, NoiseFreeMatchesTruth)
{
  Rng rng(1);
  const auto d = simulate_odometry(Pose2D(0, 0, 0), Pose2D(1, 1, 1), {}, {0.1, 0.2, 0.3, 0.4}, rng);
  EXPECT_NEAR(d.delta_trans, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.delta_rot1, std::numbers::pi / 4, 1e-12);
  EXPECT_EQ(d.alphas.a4, 0.4);
}

TEST(Ranges, OnePerAnchor)
{
  auto w = open_world();
  w.anchors = {{"A", {5, 8, 1.78}}, {"B", {1, 5, 0.78}}};
  Rng rng(1);
  const auto r = simulate_ranges(w, 0.78, 0.0, rng);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].range, std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(r[1].range, 4.0, 1e-12);
  EXPECT_EQ(r[1].anchor_id, "B");
  EXPECT_EQ(r[0].robot_position.z, 0.78);
}

TEST(Follower, ReachesGoalWithinLimits)
{
  auto w = open_world();
  MetricPath p;
  for (int i = 0; i <= 30; ++i) {
    p.points.push_back({5.0 + 0.1 * i, 5.0 + (i > 15 ? 0.1 * (i - 15) : 0.0)});
  }
  p.length = polyline_length(p.points);
  const auto r = follow_path(w, p);
  EXPECT_TRUE(r.arrived);
  EXPECT_FALSE(r.aborted);
  EXPECT_EQ(r.collisions, 0);
  EXPECT_LT(distance(w.true_pose.position(), p.points.back()), 0.15 + 1e-9);
  for (const auto & c : r.commands) {
    EXPECT_LE(std::abs(c.linear), kMaxLinear + 1e-12);
    EXPECT_LE(std::abs(c.angular), kMaxAngular + 1e-12);
  }
}

TEST(Follower, TurnsInPlaceFirst)
{
  PathFollower f(MetricPath{{{5, 5}, {4, 5}, {3, 5}}, 2.0});
  const auto c = f.command(Pose2D(5, 5, 0), 0.0);
  EXPECT_EQ(c.linear, 0.0);
  EXPECT_NEAR(std::abs(c.angular), kMaxAngular, 1e-12);
}

TEST(Follower, AbortsWhenStuck)
{
  auto w = open_world();
  for (int y = 0; y < 100; ++y) {
    w.grid.set_probability(55, y, 0.95);
  }
  MetricPath p{{{5, 5}, {6, 5}, {7, 5}}, 2.0};
  const auto r = follow_path(w, p, {}, 0.1, 60.0);
  EXPECT_FALSE(r.arrived);
  EXPECT_TRUE(r.aborted);
  EXPECT_GT(r.collisions, 0);
  EXPECT_NEAR(w.true_pose.x, 5.45, 1e-9);
  EXPECT_LT(w.time, 15.0);
}

TEST(Follower, EmptyPathIsDone)
{
  PathFollower f(MetricPath{});
  EXPECT_TRUE(f.done());
  EXPECT_EQ(f.command(Pose2D(0, 0, 0), 0.0), (VelocityCommand{}));
}
