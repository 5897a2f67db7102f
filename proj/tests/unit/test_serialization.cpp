#include <gtest/gtest.h>

#include "bimnav/error.hpp"
#include "bimnav/serialization.hpp"
#include "oracles.hpp"

using namespace bimnav;

namespace
{

BuildingGraph fixture()
{
  return load_building_file(oracle::fixture("fixture_building.json"));
}

}  // namespace

TEST(Serialization, SemanticPath)
{
  const auto p = plan(fixture().with_hazard("NORTH", Hazard::high), "WEST", "EAST", {}, oracle::t0());
  const auto j = to_json(p);
  EXPECT_EQ(j["semantic_path"][0], "WEST");
  EXPECT_EQ(j["x_y_path"][0], nlohmann::json::array({2.0, 5.0}));
  EXPECT_EQ(j["total_weight"], 36.0);
  EXPECT_EQ(j["warnings"][0]["reason"], "hazard_bypassed");
  EXPECT_EQ(j["warnings"][0]["on_path"], false);
}

TEST(Serialization, RoomsSummary)
{
  const auto j = rooms_summary(fixture(), {}, oracle::t0());
  ASSERT_EQ(j.size(), 4u);
  const auto & east = j[0];
  EXPECT_EQ(east["id"], "EAST");
  EXPECT_EQ(east["weight"]["material"], 12.0);
  EXPECT_EQ(east["weight"]["total"], 14.0);
  EXPECT_DOUBLE_EQ(east["scan_age_days"].get<double>(), 21.0);
  EXPECT_EQ(east["materials"].size(), 2u);
  EXPECT_EQ(east["last_scan"], "2026-02-08T09:00:00Z");
}

TEST(Serialization, WeightsRoundTrip)
{
  WeightConfig c;
  c.w_d_pull = 9.0;
  c.scan_thresholds[1] = days(20);
  const auto back = weights_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  const auto partial = weights_from_json({{"w_h_high", 100.0}});
  EXPECT_EQ(partial.w_h_high, 100.0);
  EXPECT_EQ(partial.w_d_push, 2.0);
  EXPECT_THROW(weights_from_json({{"bogus", 1}}), ParseError);
  EXPECT_THROW(weights_from_json({{"w_h_high", -1}}), InvalidArgument);
  EXPECT_THROW(weights_from_json({{"area_weights", {1, 2}}}), Error);
}

TEST(Serialization, GridSidecarRoundTrip)
{
  SemanticOccupancyGrid g(0.25, {-1.0, 2.0}, 7, 5, 0.3);
  g.set_logodds(3, 2, 1.5);
  g.set_class(3, 2, 9);
  const auto back = grid_from_sidecar(grid_sidecar(g));
  EXPECT_EQ(back.width(), 7);
  EXPECT_EQ(back.origin(), g.origin());
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) {
      EXPECT_NEAR(back.logodds(x, y), g.logodds(x, y), 1e-12);
      EXPECT_EQ(back.cls(x, y), g.cls(x, y));
    }
  }
  auto broken = grid_sidecar(g);
  broken["classes"].erase(0);
  EXPECT_THROW(grid_from_sidecar(broken), ParseError);
}

TEST(Serialization, PgmTopRowIsNorth)
{
  SemanticOccupancyGrid g(1.0, {0, 0}, 3, 2, 0.05);
  g.set_probability(0, 1, 0.95);
  const std::string pgm = to_pgm(g);
  const std::string header = "P5\n3 2\n255\n";
  ASSERT_EQ(pgm.size(), header.size() + 6);
  EXPECT_EQ(pgm.substr(0, header.size()), header);
  EXPECT_EQ(static_cast<unsigned char>(pgm[header.size()]), 13);   // (0,1) occupied
  EXPECT_EQ(static_cast<unsigned char>(pgm[header.size() + 3]), 242);  // (0,0) free
}

TEST(Serialization, RangingLog)
{
  const std::string text =
    "{\"t\": 0.0, \"anchor_id\": \"A1\", \"robot\": {\"x\": 1, \"y\": 2, \"z\": 0.5}, \"range\": 3.0}\n"
    "\n"
    "{\"t\": 0.1, \"anchor_id\": 34, \"robot\": {\"x\": 1, \"y\": 2}, \"range\": 3.5}\n";
  const auto log = uwb::parse_ranging_log(text, 0.78);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].anchor_id, "A1");
  EXPECT_EQ(log[0].robot_position.z, 0.5);
  EXPECT_EQ(log[1].anchor_id, "34");
  EXPECT_EQ(log[1].robot_position.z, 0.78);
  EXPECT_EQ(uwb::parse_ranging_log(uwb::to_json(log[0]).dump() + "\n")[0].range, 3.0);

  try {
    uwb::parse_ranging_log("{\"t\": 0}\n{\"t\": 0, \"anchor_id\": \"A\", \"robot\": {\"x\": 1, \"y\": 2}, \"range\": -1}\n");
    FAIL();
  } catch (const ParseError & e) {
    EXPECT_NE(e.where().find('1'), std::string::npos) << e.where();
  }
  EXPECT_THROW(uwb::parse_ranging_log("not json\n"), ParseError);
}

TEST(Serialization, LocateReport)
{
  std::mt19937_64 rng(5);
  const Point3 a{3.0, 1.0, 1.8};
  const auto path = oracle::winding_path({2.5, 1.2}, 200, 0.05);
  auto log = oracle::ranges_along(path, a, 0.78, 0.0, rng, "A");
  const auto line = oracle::winding_path({20, 20}, 5, 0.01);
  for (const auto & o : oracle::ranges_along(line, a, 0.78, 0.0, rng, "B")) {
    log.push_back(o);
  }
  const std::map<std::string, Point3> truth{{"A", a}};
  const auto r = uwb::locate_report(log, {{"A", 1.8}}, 2.0, &truth);
  ASSERT_EQ(r["anchors"].size(), 2u);
  EXPECT_EQ(r["anchors"][0]["anchor_id"], "A");
  EXPECT_NEAR(r["anchors"][0]["position"][0].get<double>(), 3.0, 1e-4);
  EXPECT_LT(r["anchors"][0]["error"]["planar"].get<double>(), 1e-4);
  EXPECT_TRUE(r["anchors"][1].contains("failure"));
  EXPECT_EQ(r["summary"]["count"], 1);
}
