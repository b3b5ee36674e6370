#include "bitalloc/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace bitalloc {

namespace {

std::string join_ints(const std::vector<int>& values, const char* sep) {
  std::ostringstream out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out << sep;
    out << values[i];
  }
  return out.str();
}

// Finds a directed cycle among `alive` nodes (the ones Kahn's algorithm never
// released). Each alive node keeps an alive predecessor, so a backward walk
// must revisit a node; reversing the revisited segment gives the cycle in arc
// direction, first node repeated at the end.
std::vector<int> extract_cycle(int node_count, const std::vector<std::vector<int>>& parents,
                               const std::vector<char>& alive) {
  int start = -1;
  for (int v = 0; v < node_count; ++v) {
    if (alive[v]) {
      start = v;
      break;
    }
  }
  std::vector<int> visit_pos(node_count, -1);
  std::vector<int> walk;
  int cur = start;
  while (visit_pos[cur] < 0) {
    visit_pos[cur] = static_cast<int>(walk.size());
    walk.push_back(cur);
    for (int prev : parents[cur]) {
      if (alive[prev]) {
        cur = prev;
        break;
      }
    }
  }
  std::vector<int> cycle(walk.begin() + visit_pos[cur], walk.end());
  std::reverse(cycle.begin(), cycle.end());
  cycle.push_back(cycle.front());
  return cycle;
}

}  // namespace

void LayerDag::check_node(int node) const {
  if (node < 0 || node >= node_count_) {
    std::ostringstream msg;
    msg << "node " << node << " out of range [0, " << node_count_ << ")";
    throw IndexError(msg.str());
  }
}

const std::vector<int>& LayerDag::parents(int node) const {
  check_node(node);
  return parents_[node];
}

const std::vector<int>& LayerDag::children(int node) const {
  check_node(node);
  return children_[node];
}

const ResolutionSubgraph& LayerDag::subgraph(int resolution) const {
  check_node(resolution);
  return subgraphs_[resolution];
}

LayerDag build_dag(int node_count, std::span<const Arc> arcs) {
  if (node_count < 1) {
    throw Error(ErrorCode::invalid_argument, "node_count must be at least 1");
  }

  LayerDag dag;
  dag.node_count_ = node_count;

  for (const Arc& arc : arcs) {
    for (int endpoint : {arc.from, arc.to}) {
      if (endpoint < 0 || endpoint >= node_count) {
        std::ostringstream msg;
        msg << "arc " << arc.from << "->" << arc.to << " leaves node range [0, " << node_count
            << ")";
        throw IndexError(msg.str());
      }
    }
    if (arc.to == 0) {
      std::ostringstream msg;
      msg << "arc " << arc.from << "->0 targets the base layer; node 0 must have no incoming arcs";
      throw SourceError(msg.str());
    }
  }

  dag.arcs_.assign(arcs.begin(), arcs.end());
  std::sort(dag.arcs_.begin(), dag.arcs_.end(),
            [](const Arc& a, const Arc& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  dag.arcs_.erase(std::unique(dag.arcs_.begin(), dag.arcs_.end()), dag.arcs_.end());

  dag.parents_.assign(node_count, {});
  dag.children_.assign(node_count, {});
  for (const Arc& arc : dag.arcs_) {
    if (arc.from == arc.to) {
      throw CycleError({arc.from, arc.from}, "self-arc on node " + std::to_string(arc.from));
    }
    dag.parents_[arc.to].push_back(arc.from);
    dag.children_[arc.from].push_back(arc.to);
  }

  // Kahn's algorithm; whatever survives with nonzero in-degree lies on or
  // upstream of a cycle.
  std::vector<int> indegree(node_count, 0);
  for (const Arc& arc : dag.arcs_) ++indegree[arc.to];
  std::queue<int> ready;
  for (int v = 0; v < node_count; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop();
    dag.topo_order_.push_back(v);
    for (int next : dag.children_[v]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  if (static_cast<int>(dag.topo_order_.size()) != node_count) {
    std::vector<char> alive(node_count, 0);
    for (int v = 0; v < node_count; ++v) alive[v] = indegree[v] > 0;
    std::vector<int> cycle = extract_cycle(node_count, dag.parents_, alive);
    throw CycleError(cycle, "dependency cycle: " + join_ints(cycle, "->"));
  }

  std::vector<char> reachable(node_count, 0);
  std::queue<int> frontier;
  reachable[0] = 1;
  frontier.push(0);
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int next : dag.children_[v]) {
      if (!reachable[next]) {
        reachable[next] = 1;
        frontier.push(next);
      }
    }
  }
  std::vector<int> unreachable;
  for (int v = 0; v < node_count; ++v) {
    if (!reachable[v]) unreachable.push_back(v);
  }
  if (!unreachable.empty()) {
    throw UnreachableError(unreachable,
                           "nodes unreachable from node 0: " + join_ints(unreachable, ", "));
  }

  // pi_i = ancestors(i) together with i. Every ancestor is reachable from
  // node 0 (just validated), so "on a path from 0 to i" and "reaches i"
  // coincide; a reverse traversal from i collects exactly the members.
  dag.subgraphs_.resize(node_count);
  for (int i = 0; i < node_count; ++i) {
    std::vector<char> seen(node_count, 0);
    seen[i] = 1;
    std::queue<int> up;
    up.push(i);
    while (!up.empty()) {
      int v = up.front();
      up.pop();
      for (int parent : dag.parents_[v]) {
        if (!seen[parent]) {
          seen[parent] = 1;
          up.push(parent);
        }
      }
    }
    ResolutionSubgraph& sub = dag.subgraphs_[i];
    sub.resolution = i;
    for (int v = 0; v < node_count; ++v) {
      if (seen[v]) sub.members.push_back(v);
    }
    sub.parent_set = dag.parents_[i];
    std::sort(sub.parent_set.begin(), sub.parent_set.end());
  }
  for (auto& parent_list : dag.parents_) std::sort(parent_list.begin(), parent_list.end());
  for (auto& child_list : dag.children_) std::sort(child_list.begin(), child_list.end());

  return dag;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::cycle: return "cycle";
    case ErrorCode::unreachable: return "unreachable";
    case ErrorCode::source: return "source";
    case ErrorCode::index: return "index";
    case ErrorCode::infeasible_allocation: return "infeasible_allocation";
    case ErrorCode::off_grid: return "off_grid";
    case ErrorCode::empty_slice: return "empty_slice";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::not_monotone: return "not_monotone";
    case ErrorCode::grid_too_large: return "grid_too_large";
    case ErrorCode::not_convex_model: return "not_convex_model";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::too_few_samples: return "too_few_samples";
    case ErrorCode::empty_front: return "empty_front";
    case ErrorCode::parse: return "parse";
    case ErrorCode::schema: return "schema";
    case ErrorCode::io: return "io";
    case ErrorCode::unknown: break;
  }
  return "unknown";
}

}  // namespace bitalloc
