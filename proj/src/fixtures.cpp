#include "bitalloc/fixtures.hpp"

#include <algorithm>

namespace bitalloc {

namespace {

ExperimentConfig base_config(const std::string& name, int node_count, std::vector<Arc> arcs,
                             double budget, double grid_step, int weight_resolution) {
  ExperimentConfig config;
  config.name = name;
  config.dag.node_count = node_count;
  config.dag.arcs = std::move(arcs);
  config.budget = budget;
  config.grid_step = grid_step;
  config.weight_resolution = weight_resolution;
  config.model.bases.assign(node_count, 1.0);
  config.model.gains.assign(node_count, {});
  config.outputs.directory = "out/" + name;
  config.outputs.formats = {"csv", "json", "plotdata"};
  return config;
}

// Three resolutions, two enhancement branches off one base. Gains chosen so
// each branch rewards its own bits twice as much as base bits.
ExperimentConfig diamond3() {
  ExperimentConfig config = base_config("diamond3", 3, {{0, 1}, {0, 2}}, 1.0, 0.1, 64);
  config.model.gains = {{{0, 1.0}}, {{0, 1.0}, {1, 2.0}}, {{0, 1.0}, {2, 2.0}}};
  return config;
}

// Quality chain 0 -> 1 -> 2 (think QCIF/CIF/HD ladder): deeper resolutions
// benefit more from bits spent deeper in the chain.
ExperimentConfig qcif_chain() {
  ExperimentConfig config = base_config("qcif-chain", 3, {{0, 1}, {1, 2}}, 1.0, 0.05, 64);
  config.model.gains = {{{0, 1.0}}, {{0, 1.0}, {1, 2.0}}, {{0, 1.0}, {1, 2.0}, {2, 3.0}}};
  return config;
}

// Same chain with every gain left at the default 1: bits help every
// downstream resolution equally, so one allocation dominates everything.
ExperimentConfig homogeneous_chain() {
  return base_config("homogeneous-chain", 3, {{0, 1}, {1, 2}}, 1.0, 0.25, 16);
}

// Five resolutions, one diamond plus a side branch.
ExperimentConfig dag5() {
  return base_config("dag5", 5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 4}}, 1.0, 0.25, 4);
}

// Spatio-temporal grid of an SVC-style encoder: three temporal levels
// (columns 0/4/8) each carrying a spatial and a quality refinement chain.
ExperimentConfig svc_fig3() {
  return base_config("svc-fig3", 12,
                     {{0, 1},
                      {1, 2},
                      {2, 3},
                      {4, 5},
                      {5, 6},
                      {6, 7},
                      {8, 9},
                      {9, 10},
                      {10, 11},
                      {0, 4},
                      {4, 8}},
                     1.0, 0.5, 2);
}

// Same grid with extra inter-layer arcs, so some nodes are reachable along
// more than one path.
ExperimentConfig svc_fig4() {
  ExperimentConfig config = svc_fig3();
  config.name = "svc-fig4";
  config.outputs.directory = "out/svc-fig4";
  config.dag.arcs.insert(config.dag.arcs.end(), {{1, 4}, {5, 8}, {1, 5}, {5, 9}});
  return config;
}

// Measured-style two-resolution table whose middle trade-off point lies above
// the segment between the extremes: the classic unsupported-point shape.
ExperimentConfig nonconvex3() {
  ExperimentConfig config = base_config("nonconvex3", 2, {{0, 1}}, 1.0, 0.5, 64);
  config.model.kind = ModelKind::tabulated;
  config.model.bases.clear();
  config.model.gains.clear();
  config.model.table_csv = "nonconvex3.csv";
  config.model.table_rows = {
      {{0.0, 0.0}, {6.0, 6.0}},  {{0.0, 0.5}, {5.5, 4.0}}, {{0.0, 1.0}, {5.0, 1.0}},
      {{0.5, 0.0}, {4.0, 5.5}},  {{0.5, 0.5}, {3.5, 3.5}}, {{1.0, 0.0}, {1.0, 5.0}},
  };
  return config;
}

// Minimal strictly convex two-resolution chain; its weak front is a curve.
ExperimentConfig convex2() {
  ExperimentConfig config = base_config("convex2", 2, {{0, 1}}, 1.0, 0.1, 64);
  config.model.gains = {{{0, 1.0}}, {{0, 1.0}, {1, 2.0}}};
  return config;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "qcif-chain", "dag5",       "svc-fig3",           "svc-fig4",
      "diamond3",   "nonconvex3", "homogeneous-chain", "convex2",
  };
  return names;
}

bool is_fixture(const std::string& name) {
  const auto& names = fixture_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentConfig fixture_config(const std::string& name) {
  if (name == "diamond3") return diamond3();
  if (name == "qcif-chain") return qcif_chain();
  if (name == "homogeneous-chain") return homogeneous_chain();
  if (name == "dag5") return dag5();
  if (name == "svc-fig3") return svc_fig3();
  if (name == "svc-fig4") return svc_fig4();
  if (name == "nonconvex3") return nonconvex3();
  if (name == "convex2") return convex2();
  throw Error(ErrorCode::invalid_argument, "unknown fixture \"" + name + "\"");
}

}  // namespace bitalloc
