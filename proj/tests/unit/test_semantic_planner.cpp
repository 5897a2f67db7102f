#include <gtest/gtest.h>

#include <random>

#include "bimnav/error.hpp"
#include "bimnav/semantic_planner.hpp"
#include "oracles.hpp"

using namespace bimnav;

namespace
{

BuildingGraph fixture()
{
  return load_building_file(oracle::fixture("fixture_building.json"));
}

using Seq = std::vector<std::string>;

}  // namespace

TEST(SemanticPlanner, FixtureOutbound)
{
  const auto p = plan(fixture(), "WEST", "EAST", {}, oracle::t0());
  EXPECT_EQ(p.semantic_path, (Seq{"WEST", "D-WN", "NORTH", "D-NE", "EAST"}));
  EXPECT_EQ(p.total_weight, 30.0);
  EXPECT_TRUE(p.warnings.empty());
  ASSERT_EQ(p.x_y_path.size(), 5u);
  EXPECT_EQ(p.x_y_path[0], (Point2{2, 5}));
  EXPECT_EQ(p.x_y_path[1], (Point2{4, 8.5}));
  EXPECT_EQ(p.x_y_path[4], (Point2{14, 5}));
  EXPECT_EQ(p.rooms(), (Seq{"WEST", "NORTH", "EAST"}));
  EXPECT_EQ(p.doors(), (Seq{"D-WN", "D-NE"}));
}

TEST(SemanticPlanner, SameRoom)
{
  const auto p = plan(fixture(), "SOUTH", "SOUTH", {}, oracle::t0());
  EXPECT_EQ(p.semantic_path, Seq{"SOUTH"});
  EXPECT_EQ(p.total_weight, 12.0);
}

TEST(SemanticPlanner, HazardReroutesAndWarns)
{
  const auto g = fixture().with_hazard("NORTH", Hazard::high);
  const auto p = plan(g, "WEST", "EAST", {}, oracle::t0());
  EXPECT_EQ(p.rooms(), (Seq{"WEST", "SOUTH", "EAST"}));
  EXPECT_EQ(p.total_weight, 36.0);
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_EQ(p.warnings[0].room_id, "NORTH");
  EXPECT_EQ(p.warnings[0].reason, "hazard_bypassed");
  EXPECT_FALSE(p.warnings[0].on_path);
  EXPECT_EQ(p.warnings[0].weight, 506.0);
}

TEST(SemanticPlanner, UnavoidableHazardIsOnPathWarning)
{
  const auto g = fixture().with_hazard("EAST", Hazard::high);
  const auto p = plan(g, "WEST", "EAST", {}, oracle::t0());
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_EQ(p.warnings[0].room_id, "EAST");
  EXPECT_EQ(p.warnings[0].reason, "hazard");
  EXPECT_TRUE(p.warnings[0].on_path);
}

TEST(SemanticPlanner, HighWeightWarning)
{
  WeightConfig c;
  c.w_m_invisible = 600;
  const auto p = plan(fixture(), "WEST", "EAST", c, oracle::t0());
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_EQ(p.warnings[0].reason, "high_weight");
}

TEST(SemanticPlanner, ScanAgeDrivesReturnTrip)
{
  const Timestamp now = oracle::t0();
  const auto g0 = fixture();
  const auto out = plan(g0, "WEST", "EAST", {}, now);
  const auto g1 = replan_after_visit(g0, out, now);
  const auto back = plan(g1, "EAST", "WEST", {}, now);
  EXPECT_EQ(back.rooms(), (Seq{"EAST", "SOUTH", "WEST"}));
  EXPECT_EQ(back.total_weight, 64.0);

  WeightConfig flat;
  flat.scan_weights[0] = flat.scan_weights[1] = flat.scan_weights[2] = 0.0;
  const auto same = plan(g1, "EAST", "WEST", flat, now);
  EXPECT_EQ(same.rooms(), (Seq{"EAST", "NORTH", "WEST"}));
}

TEST(SemanticPlanner, Errors)
{
  const auto g = fixture();
  EXPECT_THROW(plan(g, "WEST", "ATTIC", {}, oracle::t0()), ReferenceError);
  EXPECT_THROW(plan(g, "ATTIC", "WEST", {}, oracle::t0()), ReferenceError);
  RoomNode island = g.room("WEST");
  island.room_id = "ISLAND";
  island.polygon = {{100, 100}, {101, 100}, {101, 101}, {100, 101}};
  island.center = {100.5, 100.5};
  std::vector<RoomNode> rooms;
  for (const auto & [id, r] : g.rooms()) {
    rooms.push_back(r);
  }
  rooms.push_back(island);
  const auto h = BuildingGraph::create(g.materials(), rooms, g.doors());
  EXPECT_THROW(plan(h, "WEST", "ISLAND", {}, oracle::t0()), NoPathError);
}

TEST(SemanticPlanner, PathWeight)
{
  const auto g = fixture();
  EXPECT_EQ(path_weight(g, {"WEST", "D-WS", "SOUTH", "D-SE", "EAST"}, {}, oracle::t0()), 36.0);
  EXPECT_EQ(path_weight(g, {"EAST", "D-SE", "SOUTH"}, {}, oracle::t0()), 14 + 6 + 12.0);
  EXPECT_THROW(path_weight(g, {"WEST", "D-NE", "EAST"}, {}, oracle::t0()), InvalidArgument);
  EXPECT_THROW(path_weight(g, {"WEST", "D-WN"}, {}, oracle::t0()), InvalidArgument);
}

// Property: the planner agrees with exhaustive enumeration, including the
// lexicographic tie-break, and its reported weight equals the recomputed one.
TEST(SemanticPlanner, MatchesBruteForceOnRandomBuildings)
{
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = oracle::random_building(rng, 2 + trial % 7);
    std::vector<std::string> ids;
    for (const auto & [id, r] : g.rooms()) {
      ids.push_back(id);
    }
    for (const auto & s : ids) {
      for (const auto & t : ids) {
        const auto expect = oracle::brute_force_plan(g, s, t, {}, oracle::t0());
        if (expect.paths == 0) {
          EXPECT_THROW(plan(g, s, t, {}, oracle::t0()), NoPathError);
          continue;
        }
        const auto got = plan(g, s, t, {}, oracle::t0());
        EXPECT_EQ(got.total_weight, expect.weight);
        EXPECT_EQ(got.semantic_path, expect.sequence);
        EXPECT_EQ(path_weight(g, got.semantic_path, {}, oracle::t0()), got.total_weight);
        for (const auto & w : got.warnings) {
          const auto rooms = got.rooms();
          const bool present = std::find(rooms.begin(), rooms.end(), w.room_id) != rooms.end();
          EXPECT_EQ(w.on_path, present);
        }
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 1000);
}

TEST(SemanticPlanner, VisitOnlyLowersOrKeepsAge)
{
  const auto g = fixture();
  const auto h = replan_after_visit(g, std::vector<std::string>{"NORTH"}, oracle::t0());
  EXPECT_EQ(h.room("NORTH").last_scan, oracle::t0());
  EXPECT_EQ(h.room("SOUTH").last_scan, g.room("SOUTH").last_scan);
}
