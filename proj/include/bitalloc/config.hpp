#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bitalloc/distortion.hpp"
#include "bitalloc/graph.hpp"

namespace bitalloc {

struct DagConfig {
  int node_count = 0;
  std::vector<Arc> arcs;
};

// Either the layered exponential parameters or a tabulated grid. The CSV path
// is resolved against the config file's directory and loaded at parse time,
// so `table_rows` is always populated for tabulated models.
struct ModelConfig {
  ModelKind kind = ModelKind::layered_exponential;
  std::vector<double> bases;
  std::vector<std::map<int, double>> gains;
  std::string table_csv;
  std::vector<TabulatedModel::Row> table_rows;
};

struct Tolerances {
  double tie = 1e-12;
  double match = 0.0;  // 0 means "derive": twice the grid step
  double envelope = 1e-9;
  double continuity_factor = 4.0;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json"};  // subset of csv, json, plotdata
};

struct ExperimentConfig {
  std::string name;
  DagConfig dag;
  ModelConfig model;
  double budget = 0.0;
  double grid_step = 0.0;
  int weight_resolution = 64;
  Tolerances tolerances;
  OutputConfig outputs;

  double match_tolerance() const {
    return tolerances.match > 0.0 ? tolerances.match : 2.0 * grid_step;
  }
  bool wants_format(const std::string& format) const;
};

// Reads and fully validates a JSON experiment config, defaults applied.
// Structural problems raise ParseError/SchemaError; an invalid dependency
// graph inside a well-formed file raises the graph's own error.
ExperimentConfig parse_config(const std::string& path);

// Same validation for an in-memory document. `base_dir` anchors relative
// table paths; `name` labels the result.
ExperimentConfig parse_config_text(const std::string& text, const std::string& base_dir,
                                   const std::string& name);

LayerDag dag_from_config(const ExperimentConfig& config);
std::unique_ptr<DistortionModel> model_from_config(const ExperimentConfig& config,
                                                   const LayerDag& dag);

// Tabulated-model CSV: header b_0..b_{N-1},g_0..g_{N-1}, one row per grid
// allocation.
std::vector<TabulatedModel::Row> load_table_csv(const std::string& path);

}  // namespace bitalloc
