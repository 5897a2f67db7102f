#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace
{

struct Result
{
  int code{-1};
  std::string out;
};

Result run(const std::string & args)
{
  const std::string cmd = std::string(BIMNAV_CLI) + " " + args + " 2>&1";
  Result r;
  FILE * p = popen(cmd.c_str(), "r");
  if (!p) {
    return r;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string & name)
{
  const fs::path d = fs::temp_directory_path() / ("bimnav_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, Plan)
{
  const auto r = run("plan " + oracle::fixture("fixture_building.json") + " WEST EAST --now 2026-03-01T09:00:00Z");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["total_weight"], 30.0);
  EXPECT_EQ(j["semantic_path"][2], "NORTH");
}

TEST(Cli, PlanErrors)
{
  EXPECT_EQ(run("plan " + oracle::fixture("fixture_building.json") + " WEST ATTIC").code, 2);
  EXPECT_NE(run("plan /nonexistent.json WEST EAST").code, 0);
  EXPECT_NE(run("").code, 0);
}

TEST(Cli, ExportGrid)
{
  const auto d = scratch("export");
  const auto r = run("export-grid " + oracle::fixture("fixture_building.json") + " --out " + (d / "g").string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string pgm = slurp(d / "g.pgm");
  EXPECT_EQ(pgm.rfind("P5\n", 0), 0u);
  const auto side = nlohmann::json::parse(slurp(d / "g.json"));
  EXPECT_EQ(side["resolution"], 0.1);
  fs::remove_all(d);
}

TEST(Cli, RunScenarioAndLocateAnchors)
{
  const auto d = scratch("run");
  const auto r = run("run-scenario " + oracle::fixture("scenario_out_and_back.json") + " --out " + (d / "out").string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("WEST > NORTH > EAST"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("EAST > SOUTH > WEST"), std::string::npos) << r.out;

  std::ofstream(d / "truth.json") <<
    R"({"anchors": [{"id": "A1", "position": {"x": 8.0, "y": 9.6, "z": 1.8}},
                    {"id": "A2", "position": {"x": 14.5, "y": 2.0, "z": 1.5}}]})";
  const auto loc = run("locate-anchors " + (d / "out" / "ranging.jsonl").string() + " " +
      oracle::fixture("fixture_building.json") + " --ground-truth " + (d / "truth.json").string() +
      " --out " + (d / "report.json").string());
  ASSERT_EQ(loc.code, 0) << loc.out;
  const auto rep = nlohmann::json::parse(slurp(d / "report.json"));
  ASSERT_EQ(rep["anchors"].size(), 2u);
  for (const auto & a : rep["anchors"]) {
    EXPECT_LT(a["error"]["planar"].get<double>(), 0.2) << a.dump();
  }
  EXPECT_EQ(rep["anchors"][0]["room"], "NORTH");
  fs::remove_all(d);
}
