#include <benchmark/benchmark.h>

#include <random>

#include "bimnav/grid_planner.hpp"
#include "bimnav/localization.hpp"
#include "bimnav/raycast.hpp"
#include "bimnav/semantic_planner.hpp"
#include "bimnav/simulator.hpp"
#include "bimnav/uwb.hpp"

using namespace bimnav;

namespace
{

const BuildingGraph & building()
{
  static const BuildingGraph b = load_building_file(std::string(BIMNAV_FIXTURE_DIR) + "/fixture_building.json");
  return b;
}

const SemanticOccupancyGrid & grid()
{
  static const SemanticOccupancyGrid g = rasterize(building(), 0.1);
  return g;
}

Timestamp now()
{
  return parse_iso8601("2026-03-01T09:00:00Z");
}

}  // namespace

static void BM_SemanticPlan(benchmark::State & state)
{
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan(building(), "WEST", "EAST", {}, now()));
  }
}
BENCHMARK(BM_SemanticPlan);

static void BM_AStarFixture(benchmark::State & state)
{
  const auto blocked = inflate(grid(), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(astar(grid(), blocked, {2.0, 5.0}, {14.0, 5.0}));
  }
}
BENCHMARK(BM_AStarFixture);

static void BM_Inflate(benchmark::State & state)
{
  for (auto _ : state) {
    benchmark::DoNotOptimize(inflate(grid(), 0.3));
  }
}
BENCHMARK(BM_Inflate);

static void BM_Raycast(benchmark::State & state)
{
  const ClassMask mask = lidar_mask(building());
  const Pose2D pose(2.0, 5.0, 0.0);
  double a = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(raycast_semantic(grid(), pose, a, 8.0, mask));
    a += 0.1;
  }
}
BENCHMARK(BM_Raycast);

static void BM_MeasurementUpdate(benchmark::State & state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  sim::WorldState world;
  world.grid = grid();
  world.true_pose = Pose2D(2.0, 5.0, 0.0);
  sim::ScanConfig sc;
  sc.visible = lidar_mask(building());
  const LaserScan scan = sim::simulate_scan(world, sc, rng);
  BeamModelParams params;
  params.sensor_class_mask = sc.visible;
  const ParticleSet init = particles_around(grid(), world.true_pose, n, 0.2, 0.1, rng);
  for (auto _ : state) {
    ParticleSet p = init;
    benchmark::DoNotOptimize(measurement_update(p, scan, grid(), params, 2, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_MeasurementUpdate)->Arg(100)->Arg(400);

static void BM_LocateAnchor(benchmark::State & state)
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.1);
  const Point3 anchor{6.62, 1.44, 1.66};
  std::vector<uwb::RangeObservation> obs;
  for (int i = 0; i < 400; ++i) {
    const double phi = 0.02 * i;
    const double r = 1.5 + 0.8 * std::sin(3 * phi);
    const Point3 tag{6.0 + r * std::cos(phi), 1.7 + r * std::sin(phi), 0.78};
    obs.push_back({"34", tag, distance(anchor, tag) + noise(rng), 0.2 * i});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(uwb::locate_anchor(obs, anchor.z));
  }
}
BENCHMARK(BM_LocateAnchor);
BENCHMARK_MAIN();
