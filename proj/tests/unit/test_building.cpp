#include <gtest/gtest.h>

#include <random>

#include "bimnav/building.hpp"
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

RoomNode room_with(double area, ClassId wall, std::optional<Timestamp> scan, Hazard h)
{
  RoomNode r;
  r.room_id = "R";
  r.area = area;
  r.walls = {{"w0", 1}, {"w1", wall}};
  r.last_scan = scan;
  r.hazard = h;
  return r;
}

const std::vector<MaterialClass> kMats{{0, "unknown", true}, {1, "concrete", true}, {2, "glass", false}};

}  // namespace

TEST(NodeWeight, MaterialTakesWorstWall)
{
  const WeightConfig c;
  EXPECT_EQ(material_weight(room_with(10, 1, {}, Hazard::none), kMats, c), 4.0);
  EXPECT_EQ(material_weight(room_with(10, 2, {}, Hazard::none), kMats, c), 12.0);
}

TEST(NodeWeight, AreaBandsAreHalfOpen)
{
  const WeightConfig c;
  EXPECT_EQ(area_weight(0.0, c), 2.0);
  EXPECT_EQ(area_weight(49.999, c), 2.0);
  EXPECT_EQ(area_weight(50.0, c), 8.0);
  EXPECT_EQ(area_weight(99.999, c), 8.0);
  EXPECT_EQ(area_weight(100.0, c), 12.0);
  EXPECT_EQ(area_weight(1e6, c), 12.0);
}

TEST(NodeWeight, ScanAgeBands)
{
  const WeightConfig c;
  const Timestamp now = oracle::t0();
  EXPECT_EQ(scan_weight(now, now, c), 10.0);
  EXPECT_EQ(scan_weight(now - days(7) + std::chrono::seconds(1), now, c), 10.0);
  EXPECT_EQ(scan_weight(now - days(7), now, c), 6.0);
  EXPECT_EQ(scan_weight(now - days(14) + std::chrono::seconds(1), now, c), 6.0);
  EXPECT_EQ(scan_weight(now - days(14), now, c), 0.0);
  EXPECT_EQ(scan_weight(std::nullopt, now, c), 0.0);
}

TEST(NodeWeight, HazardAndTotal)
{
  const WeightConfig c;
  EXPECT_EQ(hazard_weight(Hazard::high, c), 500.0);
  EXPECT_EQ(hazard_weight(Hazard::none, c), 0.0);
  const auto b = node_weight_breakdown(room_with(60, 2, oracle::t0(), Hazard::high), kMats, c, oracle::t0());
  EXPECT_EQ(b.material, 12.0);
  EXPECT_EQ(b.area, 8.0);
  EXPECT_EQ(b.scan, 10.0);
  EXPECT_EQ(b.hazard, 500.0);
  EXPECT_EQ(b.total(), 530.0);
}

TEST(NodeWeight, MatchesOracleOnRandomRooms)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> area(0.0, 200.0);
  std::uniform_int_distribution<int> age(-3, 30 * 86400);
  std::uniform_int_distribution<int> cls(0, 2);
  const WeightConfig c;
  for (int i = 0; i < 2000; ++i) {
    RoomNode r = room_with(area(rng), static_cast<ClassId>(cls(rng)),
      i % 7 ? std::optional<Timestamp>(oracle::t0() - std::chrono::seconds(age(rng))) : std::nullopt,
      i % 5 ? Hazard::none : Hazard::high);
    EXPECT_EQ(node_weight(r, kMats, c, oracle::t0()), oracle::node_weight(r, kMats, c, oracle::t0()));
  }
}

TEST(NodeWeight, DoorWeights)
{
  const WeightConfig c;
  EXPECT_EQ(edge_weight({"d", "a", "b", {}, DoorSwing::push}, c), 2.0);
  EXPECT_EQ(edge_weight({"d", "a", "b", {}, DoorSwing::pull}, c), 6.0);
}

TEST(WeightConfig, Validation)
{
  WeightConfig c;
  EXPECT_NO_THROW(c.validate());
  c.w_d_pull = -1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.area_thresholds[1] = 40;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.scan_thresholds[1] = c.scan_thresholds[0];
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Building, FixtureLoads)
{
  const BuildingGraph g = fixture();
  EXPECT_EQ(g.rooms().size(), 4u);
  EXPECT_EQ(g.doors().size(), 4u);
  EXPECT_EQ(g.hyperedges().size(), 8u);
  const WeightConfig c;
  EXPECT_EQ(g.node_weight("WEST", c, oracle::t0()), 6.0);
  EXPECT_EQ(g.node_weight("NORTH", c, oracle::t0()), 6.0);
  EXPECT_EQ(g.node_weight("SOUTH", c, oracle::t0()), 12.0);
  EXPECT_EQ(g.node_weight("EAST", c, oracle::t0()), 14.0);
  EXPECT_EQ(g.room_at({1, 1}), "WEST");
  EXPECT_EQ(g.room_at({14, 9}), "EAST");
  EXPECT_FALSE(g.room_at({-1, 1}).has_value());
  EXPECT_THROW(g.room("NOPE"), ReferenceError);
}

TEST(Building, OutgoingIsSorted)
{
  const BuildingGraph g = fixture();
  const auto out = g.outgoing("WEST");
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(g.hyperedges()[out[0]].head_room, "NORTH");
  EXPECT_EQ(g.hyperedges()[out[1]].head_room, "SOUTH");
  for (std::size_t i : g.outgoing("EAST")) {
    EXPECT_EQ(g.hyperedges()[i].tail_room, "EAST");
    EXPECT_EQ(g.hyperedges()[i].direction_cost, DoorSwing::pull);
  }
}

TEST(Building, WithScanAndHazardCopy)
{
  const BuildingGraph g = fixture();
  const BuildingGraph h = g.with_hazard("NORTH", Hazard::high).with_scan("EAST", oracle::t0());
  EXPECT_EQ(g.room("NORTH").hazard, Hazard::none);
  EXPECT_EQ(h.room("NORTH").hazard, Hazard::high);
  EXPECT_EQ(h.room("EAST").last_scan, oracle::t0());
  EXPECT_EQ(touch_scan(g, "WEST", oracle::t0()).node_weight("WEST", {}, oracle::t0()), 16.0);
  EXPECT_THROW(g.with_scan("NOPE", oracle::t0()), ReferenceError);
}

TEST(Building, RoundTripThroughJson)
{
  const BuildingGraph g = fixture();
  const BuildingGraph h = load_building(to_json(g).dump());
  EXPECT_EQ(to_json(g), to_json(h));
}

TEST(Building, RejectsBadDocuments)
{
  nlohmann::json doc = to_json(fixture());
  auto load = [](const nlohmann::json & d) {return load_building(d.dump());};

  auto bad_door = doc;
  bad_door["doors"][0]["rooms"][1] = "ATTIC";
  try {
    load(bad_door);
    FAIL();
  } catch (const ReferenceError & e) {
    EXPECT_EQ(e.id(), "ATTIC");
  }

  auto bad_material = doc;
  bad_material["rooms"][0]["walls"][0]["material"] = 9;
  EXPECT_THROW(load(bad_material), ReferenceError);

  auto dup = doc;
  dup["rooms"][1]["id"] = "WEST";
  EXPECT_THROW(load(dup), Error);

  auto bowtie = doc;
  bowtie["rooms"][0]["polygon"] = {{0, 0}, {4, 10}, {4, 0}, {0, 10}};
  EXPECT_THROW(load(bowtie), GeometryError);

  auto swing = doc;
  swing["doors"][0]["swing"]["a_to_b"] = "slide";
  EXPECT_THROW(load(swing), ParseError);

  auto missing = doc;
  missing["rooms"][0].erase("center");
  try {
    load(missing);
    FAIL();
  } catch (const ParseError & e) {
    EXPECT_NE(std::string(e.what()).find("center"), std::string::npos) << e.what();
  }

  EXPECT_THROW(load_building("{\"materials\": ["), ParseError);
}
