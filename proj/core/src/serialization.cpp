#include "bimnav/serialization.hpp"

#include <cmath>
#include <set>

#include "bimnav/error.hpp"
#include "json_reader.hpp"

namespace bimnav
{

nlohmann::json to_json(const Point2 & p)
{
  return {p.x, p.y};
}

nlohmann::json to_json(const Point3 & p)
{
  return {{"x", p.x}, {"y", p.y}, {"z", p.z}};
}

nlohmann::json to_json(const Pose2D & p)
{
  return {{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

nlohmann::json to_json(const PathWarning & w)
{
  return {{"room_id", w.room_id}, {"reason", w.reason}, {"weight", w.weight}, {"on_path", w.on_path}};
}

nlohmann::json to_json(const SemanticPath & path)
{
  nlohmann::json xy = nlohmann::json::array();
  for (const auto & p : path.x_y_path) {
    xy.push_back(to_json(p));
  }
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto & w : path.warnings) {
    warnings.push_back(to_json(w));
  }
  return {
    {"semantic_path", path.semantic_path}, {"x_y_path", xy}, {"total_weight", path.total_weight},
    {"warnings", warnings}};
}

nlohmann::json to_json(const MetricPath & path)
{
  nlohmann::json pts = nlohmann::json::array();
  for (const auto & p : path.points) {
    pts.push_back(to_json(p));
  }
  return {{"points", pts}, {"length", path.length}};
}

nlohmann::json rooms_summary(const BuildingGraph & graph, const WeightConfig & cfg, Timestamp now)
{
  nlohmann::json out = nlohmann::json::array();
  for (const auto & [id, room] : graph.rooms()) {
    std::set<std::string> materials;
    for (const auto & wall : room.walls) {
      const MaterialClass * m = graph.material(wall.material);
      materials.insert(m ? m->name : std::to_string(wall.material));
    }
    nlohmann::json age;
    if (room.last_scan) {
      age = std::chrono::duration<double>(now - *room.last_scan).count() / 86400.0;
    }
    const auto w = node_weight_breakdown(room, graph.materials(), cfg, now);
    out.push_back(
      {{"id", id}, {"name", room.name}, {"center", to_json(room.center)}, {"area_m2", room.area},
        {"materials", materials},
        {"last_scan", room.last_scan ? nlohmann::json(format_iso8601(*room.last_scan)) : nlohmann::json()},
        {"scan_age_days", age}, {"hazard", to_string(room.hazard)},
        {"weight",
          {{"material", w.material}, {"area", w.area}, {"scan", w.scan}, {"hazard", w.hazard},
            {"total", w.total()}}}});
  }
  return out;
}

nlohmann::json grid_sidecar(const SemanticOccupancyGrid & grid)
{
  return {
    {"resolution", grid.resolution()},
    {"origin", to_json(grid.origin())},
    {"width", grid.width()},
    {"height", grid.height()},
    {"classes", std::vector<int>(grid.classes().begin(), grid.classes().end())},
    {"logodds", std::vector<double>(grid.logodds_plane().begin(), grid.logodds_plane().end())}};
}

SemanticOccupancyGrid grid_from_sidecar(const nlohmann::json & j)
{
  const detail::Field root(j, "$");
  const long w = root["width"].integer();
  const long h = root["height"].integer();
  SemanticOccupancyGrid grid(root["resolution"].number(), root["origin"].point2(), static_cast<int>(w),
    static_cast<int>(h));
  const auto classes = root["classes"];
  const auto logodds = root["logodds"];
  if (classes.size() != grid.size() || logodds.size() != grid.size()) {
    root.fail("plane sizes do not match width * height");
  }
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const std::size_t i = grid.index(x, y);
      const long c = classes[i].integer();
      if (c < 0 || c > 255) {
        classes[i].fail("class id out of range");
      }
      grid.set_class(x, y, static_cast<ClassId>(c));
      grid.set_logodds(x, y, logodds[i].number());
    }
  }
  return grid;
}

std::string to_pgm(const SemanticOccupancyGrid & grid)
{
  std::string out = "P5\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) + "\n255\n";
  out.reserve(out.size() + grid.size());
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) {
      const double p = grid.probability(x, y);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (1.0 - p)))));
    }
  }
  return out;
}

namespace uwb
{

std::vector<RangeObservation> parse_ranging_log(std::string_view text, double default_tag_height)
{
  std::vector<RangeObservation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    const std::string where = "ranging log line " + std::to_string(line_no);
    const nlohmann::json j = detail::parse_document(line, where);
    const detail::Field f(j, where);
    RangeObservation o;
    o.anchor_id = f["anchor_id"].raw().is_number() ? f["anchor_id"].raw().dump() : f["anchor_id"].string();
    const auto robot = f["robot"];
    o.robot_position = {robot["x"].number(), robot["y"].number(),
      robot.has("z") ? robot["z"].number() : default_tag_height};
    o.range = f["range"].number();
    if (!(o.range > 0.0)) {
      f["range"].fail("range must be positive");
    }
    o.t = f.has("t") ? f["t"].number() : 0.0;
    out.push_back(std::move(o));
  }
  return out;
}

nlohmann::json to_json(const RangeObservation & o)
{
  return {{"t", o.t}, {"anchor_id", o.anchor_id}, {"robot", bimnav::to_json(o.robot_position)},
    {"range", o.range}};
}

nlohmann::json to_json(const AnchorEstimate & e)
{
  return {
    {"anchor_id", e.anchor_id}, {"position", bimnav::to_json(e.position)}, {"z_a", e.z_a},
    {"residual", e.residual}, {"n_obs", e.n_obs}, {"colinearity_score", e.colinearity_score},
    {"converged", e.converged}, {"iterations", e.iterations}};
}

nlohmann::json to_json(const LocalizationErrorReport & r)
{
  auto stats = [](const ErrorStats & s) {
      return nlohmann::json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
    };
  return {{"count", r.count}, {"x", stats(r.x)}, {"y", stats(r.y)}, {"planar", stats(r.planar)}};
}

nlohmann::json locate_report(
  const std::vector<RangeObservation> & log, const std::map<std::string, double> & heights,
  double default_height, const std::map<std::string, Point3> * truth)
{
  std::map<std::string, std::vector<RangeObservation>> by_anchor;
  for (const auto & o : log) {
    by_anchor[o.anchor_id].push_back(o);
  }
  nlohmann::json anchors = nlohmann::json::array();
  std::vector<Point2> estimates;
  std::vector<Point2> truths;
  for (const auto & [id, obs] : by_anchor) {
    const auto h = heights.find(id);
    const double z_a = h != heights.end() ? h->second : default_height;
    nlohmann::json entry;
    try {
      const AnchorEstimate est = locate_anchor(obs, z_a);
      entry = to_json(est);
      if (truth) {
        const auto t = truth->find(id);
        if (t != truth->end()) {
          const Point2 tp{t->second.x, t->second.y};
          entry["truth"] = bimnav::to_json(tp);
          entry["error"] = {{"x", std::abs(est.position.x - tp.x)}, {"y", std::abs(est.position.y - tp.y)},
            {"planar", distance(est.position, tp)}};
          estimates.push_back(est.position);
          truths.push_back(tp);
        }
      }
    } catch (const Error & e) {
      entry = {{"anchor_id", id}, {"n_obs", obs.size()}, {"failure", e.what()}};
    }
    anchors.push_back(std::move(entry));
  }
  nlohmann::json report{{"anchors", anchors}};
  if (truth) {
    report["summary"] = to_json(error_report(estimates, truths));
  }
  return report;
}

}  // namespace uwb

}  // namespace bimnav
