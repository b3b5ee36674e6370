#pragma once

#include <span>
#include <vector>

#include "bitalloc/errors.hpp"

namespace bitalloc {

struct Arc {
  int from = 0;
  int to = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// Decoding prerequisites of one resolution: every node on some path from the
// base layer to `resolution`, the resolution's own node included.
struct ResolutionSubgraph {
  int resolution = 0;
  std::vector<int> members;     // sorted ascending; always contains 0 and resolution
  std::vector<int> parent_set;  // direct predecessors of resolution, sorted ascending
};

// Immutable layer-dependency DAG over nodes 0..node_count-1. Node 0 is the
// base layer: it has no incoming arcs and every node is reachable from it.
// Construction validates all of that (see build_dag).
class LayerDag {
 public:
  int node_count() const { return node_count_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  const std::vector<int>& parents(int node) const;
  const std::vector<int>& children(int node) const;

  // Nodes in an order where every arc goes forward.
  const std::vector<int>& topological_order() const { return topo_order_; }

  const ResolutionSubgraph& subgraph(int resolution) const;
  const std::vector<ResolutionSubgraph>& subgraphs() const { return subgraphs_; }

 private:
  friend LayerDag build_dag(int node_count, std::span<const Arc> arcs);

  int node_count_ = 0;
  std::vector<Arc> arcs_;                 // deduplicated, sorted by (from, to)
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<int> topo_order_;
  std::vector<ResolutionSubgraph> subgraphs_;

  void check_node(int node) const;
};

// Validates and freezes a dependency DAG. Throws IndexError for arc endpoints
// outside [0, node_count), SourceError if node 0 has an incoming arc,
// CycleError (with an explicit cycle) if the arcs are not acyclic, and
// UnreachableError listing every node with no path from node 0. Duplicate
// arcs are collapsed.
LayerDag build_dag(int node_count, std::span<const Arc> arcs);

}  // namespace bitalloc
