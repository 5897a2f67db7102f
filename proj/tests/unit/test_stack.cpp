#include <gtest/gtest.h>

#include <fstream>

#include "bimnav/error.hpp"
#include "bimnav/runner.hpp"
#include "bimnav/stack.hpp"
#include "oracles.hpp"

using namespace bimnav;

namespace
{

Scenario scenario(const std::string & name)
{
  return load_scenario_file(oracle::fixture(name));
}

std::vector<std::string> rooms_of(const MissionRecord & r)
{
  return r.semantic.rooms();
}

}  // namespace

TEST(Scenario, LoadsFixture)
{
  const auto s = scenario("scenario_hazard.json");
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.building.room("NORTH").hazard, Hazard::high);
  EXPECT_EQ(s.missions, std::vector<std::string>{"EAST"});
  ASSERT_EQ(s.anchors.size(), 2u);
  EXPECT_EQ(s.anchors[1].position.z, 1.5);
  EXPECT_EQ(s.initial_pose, Pose2D(2, 5, 0));
}

TEST(Scenario, RejectsBadDocuments)
{
  const std::string dir = BIMNAV_FIXTURE_DIR;
  EXPECT_THROW(load_scenario(R"({"building": "fixture_building.json", "start_time": "2026-03-01T09:00:00Z", "initial_pose": {"x": 2, "y": 5, "theta": 0}, "surprise": 1})", dir), Error);
  EXPECT_THROW(load_scenario(R"({"building": "fixture_building.json", "start_time": "2026-03-01T09:00:00Z", "initial_pose": {"x": 2, "y": 5, "theta": 0}, "missions": ["ATTIC"]})", dir),
    ReferenceError);
  EXPECT_THROW(load_scenario(R"({"building": "fixture_building.json", "start_time": "2026-03-01T09:00:00Z", "initial_pose": {"x": 2, "y": 5, "theta": 0}, "hazards": {"WEST": "mild"}})", dir),
    ParseError);
  EXPECT_THROW(load_scenario(R"({"missions": []})", dir), ParseError);
}

TEST(Stack, RejectsStartInsideWall)
{
  auto s = scenario("scenario_hazard.json");
  s.initial_pose = Pose2D(0.0, 5.0, 0.0);
  EXPECT_THROW(NavigationStack{s}, Error);
}

TEST(Stack, HazardMissionAvoidsNorth)
{
  NavigationStack stack(scenario("scenario_hazard.json"));
  EXPECT_EQ(stack.current_room(), "WEST");
  const auto rec = stack.run_mission("EAST");
  EXPECT_TRUE(rec.arrived);
  EXPECT_EQ(rooms_of(rec), (std::vector<std::string>{"WEST", "SOUTH", "EAST"}));
  EXPECT_EQ(rec.collisions, 0);
  EXPECT_EQ(stack.current_room(), "EAST");
  EXPECT_EQ(stack.state(), MissionState::arrived);
  EXPECT_LT(distance(stack.world().true_pose.position(), {14, 5}), 0.4);
  // visited rooms are marked as scanned
  EXPECT_EQ(stack.building().room("SOUTH").last_scan, stack.now() - std::chrono::seconds(0));
  EXPECT_FALSE(stack.ranging_log().empty());
}

TEST(Stack, OutAndBackTakesOtherCorridor)
{
  auto s = scenario("scenario_out_and_back.json");
  NavigationStack stack(s);
  const auto out = stack.run_mission("EAST");
  const auto back = stack.run_mission("WEST");
  EXPECT_TRUE(out.arrived);
  EXPECT_TRUE(back.arrived);
  EXPECT_EQ(rooms_of(out), (std::vector<std::string>{"WEST", "NORTH", "EAST"}));
  EXPECT_EQ(rooms_of(back), (std::vector<std::string>{"EAST", "SOUTH", "WEST"}));
}

TEST(Stack, TrackingStaysAccurate)
{
  NavigationStack stack(scenario("scenario_out_and_back.json"));
  double worst = 0.0;
  stack.run_mission("EAST", [&](const TelemetryEvent & e) {
      worst = std::max(worst, distance(e.true_pose.position(), e.estimate.position()));
    });
  EXPECT_LT(worst, 0.3);
}

TEST(Stack, UnknownObstacleTriggersReplan)
{
  NavigationStack stack(scenario("scenario_obstacle.json"));
  const auto rec = stack.run_mission("EAST");
  EXPECT_TRUE(rec.arrived);
  EXPECT_GE(rec.replans, 1);
  EXPECT_EQ(rec.collisions, 0);
  EXPECT_GT(stack.map_version(), 0u);
}

TEST(Stack, StopAndBusy)
{
  NavigationStack stack(scenario("scenario_hazard.json"));
  stack.begin_localization(3);
  EXPECT_TRUE(stack.busy());
  EXPECT_THROW(stack.start(stack.plan_to("EAST")), InvalidArgument);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(stack.tick().state, i < 2 ? MissionState::localizing : MissionState::idle);
  }
  stack.start(stack.plan_to("EAST"));
  EXPECT_EQ(stack.state(), MissionState::moving);
  stack.tick();
  stack.stop();
  EXPECT_EQ(stack.state(), MissionState::aborted);
  const auto e = stack.tick();
  EXPECT_EQ(e.state, MissionState::aborted);
  EXPECT_EQ(e.seq, 4u);
}

TEST(Stack, SameSeedSameTelemetry)
{
  auto run = [](std::uint64_t seed) {
      auto s = scenario("scenario_hazard.json");
      s.seed = seed;
      NavigationStack stack(s);
      std::string log;
      stack.run_mission("EAST", [&](const TelemetryEvent & e) {log += to_json(e).dump() + "\n";});
      return log;
    };
  const std::string a = run(7);
  EXPECT_EQ(a, run(7));
  EXPECT_NE(a, run(8));
}

TEST(Runner, WritesAllOutputs)
{
  const auto dir = std::filesystem::temp_directory_path() / "bimnav_runner_test";
  std::filesystem::remove_all(dir);
  const auto r = run_scenario(scenario("scenario_hazard.json"), dir);
  EXPECT_TRUE(r.success);
  ASSERT_EQ(r.missions.size(), 1u);
  for (const char * f : {"telemetry.jsonl", "missions.json", "ranging.jsonl", "uwb_report.json", "map.pgm",
      "map.json"})
  {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "uwb_report.json");
  const auto report = nlohmann::json::parse(in);
  EXPECT_TRUE(report.contains("anchors"));
  std::filesystem::remove_all(dir);
}
