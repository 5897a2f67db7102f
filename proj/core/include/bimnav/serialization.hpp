#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bimnav/building.hpp"
#include "bimnav/grid.hpp"
#include "bimnav/grid_planner.hpp"
#include "bimnav/semantic_planner.hpp"
#include "bimnav/uwb.hpp"

namespace bimnav
{

nlohmann::json to_json(const Point2 & p);
nlohmann::json to_json(const Point3 & p);
nlohmann::json to_json(const Pose2D & p);

/// Same layout load_building reads.
nlohmann::json to_json(const BuildingGraph & graph);
nlohmann::json to_json(const WeightConfig & cfg);
/// Applies the keys present in `j` on top of `base`. Unknown keys throw
/// ParseError, invalid values InvalidArgument.
WeightConfig weights_from_json(const nlohmann::json & j, WeightConfig base = {});

nlohmann::json to_json(const PathWarning & w);
nlohmann::json to_json(const SemanticPath & path);
nlohmann::json to_json(const MetricPath & path);

/// Room list with the attributes the console shows, including the weight
/// breakdown and scan age at `now`.
nlohmann::json rooms_summary(const BuildingGraph & graph, const WeightConfig & cfg, Timestamp now);

/// Sidecar of a grid export: geometry plus the class and log-odds planes,
/// row-major from the origin.
nlohmann::json grid_sidecar(const SemanticOccupancyGrid & grid);
/// Rebuilds a grid from its sidecar.
SemanticOccupancyGrid grid_from_sidecar(const nlohmann::json & j);
/// Binary PGM (P5) of occupancy, 255 free, 0 occupied, top row = largest y.
std::string to_pgm(const SemanticOccupancyGrid & grid);

namespace uwb
{
/// One JSON object per line: {t, anchor_id, robot:{x,y,z}, range}. Blank lines
/// are skipped; a missing robot z takes `default_tag_height`.
std::vector<RangeObservation> parse_ranging_log(std::string_view text, double default_tag_height = kDefaultTagHeight);
nlohmann::json to_json(const RangeObservation & o);
nlohmann::json to_json(const AnchorEstimate & e);
nlohmann::json to_json(const LocalizationErrorReport & r);

/// Groups `log` by anchor and runs locate_anchor on each. The anchor height
/// comes from `heights` (else `default_height`). Anchors that cannot be
/// solved get an entry with "failure". With `truth`, each estimate carries its
/// error and an error summary over the solved anchors is added.
nlohmann::json locate_report(
  const std::vector<RangeObservation> & log, const std::map<std::string, double> & heights,
  double default_height, const std::map<std::string, Point3> * truth = nullptr);
}  // namespace uwb

}  // namespace bimnav
