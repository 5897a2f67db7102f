#include "bimnav/semantic_planner.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>

#include "bimnav/error.hpp"

namespace bimnav
{

namespace
{

struct Label
{
  double cost{std::numeric_limits<double>::infinity()};
  std::vector<std::string> sequence;
  std::vector<std::size_t> edges;
  bool settled{false};

  bool better_than(const Label & other) const
  {
    if (cost != other.cost) {
      return cost < other.cost;
    }
    return sequence < other.sequence;
  }
};

/// Label-setting search over rooms. Each hyperedge joins exactly one tail to
/// one head, and all weights are non-negative, so the first label settled at
/// the goal is optimal.
std::optional<Label> search(
  const BuildingGraph & graph, const std::string & start, const std::string & goal,
  const WeightConfig & cfg, Timestamp now)
{
  std::map<std::string, Label> labels;
  for (const auto & [id, room] : graph.rooms()) {
    labels[id];
  }
  Label & first = labels.at(start);
  first.cost = graph.node_weight(start, cfg, now);
  first.sequence = {start};

  while (true) {
    Label * best = nullptr;
    std::string best_id;
    for (auto & [id, label] : labels) {
      if (!label.settled && std::isfinite(label.cost) && (!best || label.better_than(*best))) {
        best = &label;
        best_id = id;
      }
    }
    if (!best) {
      return std::nullopt;
    }
    best->settled = true;
    if (best_id == goal) {
      return *best;
    }
    for (std::size_t e : graph.outgoing(best_id)) {
      const DoorHyperedge & edge = graph.hyperedges()[e];
      Label & next = labels.at(edge.head_room);
      if (next.settled) {
        continue;
      }
      Label candidate;
      candidate.cost = best->cost + edge_weight(edge, cfg) + graph.node_weight(edge.head_room, cfg, now);
      candidate.sequence = best->sequence;
      candidate.sequence.push_back(edge.door_id);
      candidate.sequence.push_back(edge.head_room);
      if (candidate.better_than(next)) {
        candidate.edges = best->edges;
        candidate.edges.push_back(e);
        next = std::move(candidate);
      }
    }
  }
}

void check_room(const BuildingGraph & graph, std::string_view id)
{
  if (!graph.has_room(id)) {
    throw ReferenceError(std::string(id), "plan");
  }
}

}  // namespace

std::vector<std::string> SemanticPath::rooms() const
{
  std::vector<std::string> out;
  for (std::size_t i = 0; i < semantic_path.size(); i += 2) {
    out.push_back(semantic_path[i]);
  }
  return out;
}

std::vector<std::string> SemanticPath::doors() const
{
  std::vector<std::string> out;
  for (std::size_t i = 1; i < semantic_path.size(); i += 2) {
    out.push_back(semantic_path[i]);
  }
  return out;
}

SemanticPath plan(
  const BuildingGraph & graph, std::string_view start, std::string_view goal,
  const WeightConfig & cfg, Timestamp now)
{
  check_room(graph, start);
  check_room(graph, goal);
  cfg.validate();

  const std::string start_id(start);
  const std::string goal_id(goal);
  const auto found = search(graph, start_id, goal_id, cfg, now);
  if (!found) {
    throw NoPathError("no path from room '" + start_id + "' to room '" + goal_id + "'");
  }

  SemanticPath path;
  path.semantic_path = found->sequence;
  path.total_weight = found->cost;
  path.x_y_path.push_back(graph.room(start_id).center);
  for (std::size_t e : found->edges) {
    const DoorHyperedge & edge = graph.hyperedges()[e];
    path.x_y_path.push_back(edge.location);
    path.x_y_path.push_back(graph.room(edge.head_room).center);
  }

  const auto on_path = path.rooms();
  for (const auto & id : on_path) {
    const double w = graph.node_weight(id, cfg, now);
    if (w >= cfg.warning_threshold) {
      const bool hazard = graph.room(id).hazard == Hazard::high;
      path.warnings.push_back({id, hazard ? "hazard" : "high_weight", w, true});
    }
  }

  // Report hazards that the route avoids, i.e. those on the optimum computed
  // as if no room were hazardous.
  const bool any_hazard = std::any_of(
    graph.rooms().begin(), graph.rooms().end(),
    [](const auto & kv) {return kv.second.hazard == Hazard::high;});
  if (any_hazard && cfg.w_h_high > 0.0) {
    WeightConfig blind = cfg;
    blind.w_h_high = 0.0;
    if (const auto naive = search(graph, start_id, goal_id, blind, now)) {
      for (std::size_t i = 0; i < naive->sequence.size(); i += 2) {
        const std::string & id = naive->sequence[i];
        if (graph.room(id).hazard == Hazard::high &&
          std::find(on_path.begin(), on_path.end(), id) == on_path.end())
        {
          path.warnings.push_back({id, "hazard_bypassed", graph.node_weight(id, cfg, now), false});
        }
      }
    }
  }
  return path;
}

double path_weight(
  const BuildingGraph & graph, const std::vector<std::string> & semantic_path,
  const WeightConfig & cfg, Timestamp now)
{
  if (semantic_path.empty() || semantic_path.size() % 2 == 0) {
    throw InvalidArgument("a semantic path alternates rooms and doors and ends with a room");
  }
  double total = graph.node_weight(semantic_path.front(), cfg, now);
  for (std::size_t i = 1; i + 1 < semantic_path.size(); i += 2) {
    const std::string & tail = semantic_path[i - 1];
    const std::string & door = semantic_path[i];
    const std::string & head = semantic_path[i + 1];
    const DoorHyperedge * match = nullptr;
    for (std::size_t e : graph.outgoing(tail)) {
      const auto & edge = graph.hyperedges()[e];
      if (edge.door_id == door && edge.head_room == head) {
        match = &edge;
      }
    }
    if (!match) {
      throw InvalidArgument("no door '" + door + "' from '" + tail + "' to '" + head + "'");
    }
    total += edge_weight(*match, cfg) + graph.node_weight(head, cfg, now);
  }
  return total;
}

BuildingGraph replan_after_visit(const BuildingGraph & graph, const SemanticPath & visited, Timestamp now)
{
  return replan_after_visit(graph, visited.rooms(), now);
}

BuildingGraph replan_after_visit(
  const BuildingGraph & graph, const std::vector<std::string> & rooms, Timestamp now)
{
  BuildingGraph out = graph;
  for (const auto & id : rooms) {
    out = touch_scan(out, id, now);
  }
  return out;
}

}  // namespace bimnav
