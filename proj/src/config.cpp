#include "bitalloc/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bitalloc {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void missing(const std::string& field) {
  throw SchemaError("missing required config field \"" + field + "\"");
}

double positive_number(const Json& value, const std::string& field) {
  if (!value.is_number()) throw SchemaError("config field \"" + field + "\" must be a number");
  double v = value.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw SchemaError("config field \"" + field + "\" must be positive");
  }
  return v;
}

void reject_unknown_keys(const Json& object, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw SchemaError("unknown config field \"" + key + "\" in " + where);
    }
  }
}

DagConfig parse_dag(const Json& node) {
  if (!node.is_object()) throw SchemaError("config field \"dag\" must be an object");
  reject_unknown_keys(node, {"node_count", "arcs"}, "dag");
  if (!node.contains("node_count")) missing("dag.node_count");
  if (!node["node_count"].is_number_integer()) {
    throw SchemaError("config field \"dag.node_count\" must be an integer");
  }
  DagConfig dag;
  dag.node_count = node["node_count"].get<int>();
  if (dag.node_count < 1) throw SchemaError("config field \"dag.node_count\" must be at least 1");
  if (!node.contains("arcs")) missing("dag.arcs");
  if (!node["arcs"].is_array()) throw SchemaError("config field \"dag.arcs\" must be an array");
  for (const Json& arc : node["arcs"]) {
    if (!arc.is_array() || arc.size() != 2 || !arc[0].is_number_integer() ||
        !arc[1].is_number_integer()) {
      throw SchemaError("each dag arc must be a [from, to] integer pair");
    }
    dag.arcs.push_back({arc[0].get<int>(), arc[1].get<int>()});
  }
  return dag;
}

ModelConfig parse_model(const Json& node, int node_count, const std::string& base_dir) {
  if (!node.is_object()) throw SchemaError("config field \"model\" must be an object");
  if (!node.contains("kind")) missing("model.kind");
  if (!node["kind"].is_string()) throw SchemaError("config field \"model.kind\" must be a string");
  std::string kind = node["kind"].get<std::string>();

  ModelConfig model;
  if (kind == "layered_exponential") {
    model.kind = ModelKind::layered_exponential;
    reject_unknown_keys(node, {"kind", "bases", "gains"}, "model");
    model.bases.assign(node_count, 1.0);
    if (node.contains("bases")) {
      const Json& bases = node["bases"];
      if (!bases.is_array() || static_cast<int>(bases.size()) != node_count) {
        throw SchemaError("config field \"model.bases\" must list one value per node");
      }
      for (int i = 0; i < node_count; ++i) {
        model.bases[i] = positive_number(bases[i], "model.bases[" + std::to_string(i) + "]");
      }
    }
    model.gains.assign(node_count, {});
    if (node.contains("gains")) {
      const Json& gains = node["gains"];
      if (!gains.is_array() || static_cast<int>(gains.size()) != node_count) {
        throw SchemaError("config field \"model.gains\" must list one map per node");
      }
      for (int i = 0; i < node_count; ++i) {
        if (!gains[i].is_object()) {
          throw SchemaError("config field \"model.gains[" + std::to_string(i) +
                            "]\" must map node ids to gains");
        }
        for (const auto& [key, value] : gains[i].items()) {
          int target = 0;
          try {
            size_t consumed = 0;
            target = std::stoi(key, &consumed);
            if (consumed != key.size()) throw std::invalid_argument(key);
          } catch (const std::exception&) {
            throw SchemaError("gain key \"" + key + "\" of resolution " + std::to_string(i) +
                              " is not a node id");
          }
          if (!value.is_number()) {
            throw SchemaError("gain of resolution " + std::to_string(i) + ", node " + key +
                              " must be a number");
          }
          model.gains[i][target] = value.get<double>();
        }
      }
    }
  } else if (kind == "tabulated") {
    model.kind = ModelKind::tabulated;
    reject_unknown_keys(node, {"kind", "table_csv"}, "model");
    if (!node.contains("table_csv")) missing("model.table_csv");
    if (!node["table_csv"].is_string()) {
      throw SchemaError("config field \"model.table_csv\" must be a path string");
    }
    model.table_csv = node["table_csv"].get<std::string>();
    std::filesystem::path path(model.table_csv);
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    model.table_rows = load_table_csv(path.string());
  } else {
    throw SchemaError("unknown model kind \"" + kind +
                      "\" (expected layered_exponential or tabulated)");
  }
  return model;
}

Tolerances parse_tolerances(const Json& node) {
  Tolerances tol;
  if (!node.is_object()) throw SchemaError("config field \"tolerances\" must be an object");
  reject_unknown_keys(node, {"tie", "match", "envelope", "continuity_factor"}, "tolerances");
  if (node.contains("tie")) tol.tie = positive_number(node["tie"], "tolerances.tie");
  if (node.contains("match")) tol.match = positive_number(node["match"], "tolerances.match");
  if (node.contains("envelope")) {
    tol.envelope = positive_number(node["envelope"], "tolerances.envelope");
  }
  if (node.contains("continuity_factor")) {
    tol.continuity_factor =
        positive_number(node["continuity_factor"], "tolerances.continuity_factor");
  }
  return tol;
}

OutputConfig parse_outputs(const Json& node) {
  OutputConfig outputs;
  if (!node.is_object()) throw SchemaError("config field \"outputs\" must be an object");
  reject_unknown_keys(node, {"directory", "formats"}, "outputs");
  if (node.contains("directory")) {
    if (!node["directory"].is_string()) {
      throw SchemaError("config field \"outputs.directory\" must be a string");
    }
    outputs.directory = node["directory"].get<std::string>();
  }
  if (node.contains("formats")) {
    if (!node["formats"].is_array()) {
      throw SchemaError("config field \"outputs.formats\" must be an array");
    }
    outputs.formats.clear();
    for (const Json& fmt : node["formats"]) {
      if (!fmt.is_string()) throw SchemaError("output formats must be strings");
      std::string f = fmt.get<std::string>();
      if (f != "csv" && f != "json" && f != "plotdata") {
        throw SchemaError("unknown output format \"" + f +
                          "\" (expected csv, json, or plotdata)");
      }
      if (std::find(outputs.formats.begin(), outputs.formats.end(), f) == outputs.formats.end()) {
        outputs.formats.push_back(f);
      }
    }
  }
  return outputs;
}

}  // namespace

bool ExperimentConfig::wants_format(const std::string& format) const {
  return std::find(outputs.formats.begin(), outputs.formats.end(), format) !=
         outputs.formats.end();
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& base_dir,
                                   const std::string& name) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw SchemaError("config root must be a JSON object");
  reject_unknown_keys(doc,
                      {"dag", "model", "budget", "grid_step", "weight_resolution", "tolerances",
                       "outputs"},
                      "the config root");

  ExperimentConfig config;
  config.name = name;
  if (!doc.contains("dag")) missing("dag");
  config.dag = parse_dag(doc["dag"]);
  if (!doc.contains("budget")) missing("budget");
  config.budget = positive_number(doc["budget"], "budget");
  if (!doc.contains("grid_step")) missing("grid_step");
  config.grid_step = positive_number(doc["grid_step"], "grid_step");
  if (!doc.contains("model")) missing("model");
  config.model = parse_model(doc["model"], config.dag.node_count, base_dir);
  if (doc.contains("weight_resolution")) {
    if (!doc["weight_resolution"].is_number_integer()) {
      throw SchemaError("config field \"weight_resolution\" must be an integer");
    }
    config.weight_resolution = doc["weight_resolution"].get<int>();
    if (config.weight_resolution < 1) {
      throw SchemaError("config field \"weight_resolution\" must be at least 1");
    }
  }
  if (doc.contains("tolerances")) config.tolerances = parse_tolerances(doc["tolerances"]);
  if (doc.contains("outputs")) config.outputs = parse_outputs(doc["outputs"]);

  // Cross-field validation: the dag must build and the model must bind to it.
  LayerDag dag = dag_from_config(config);
  model_from_config(config, dag);
  return config;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::filesystem::path p(path);
  return parse_config_text(buffer.str(), p.parent_path().string(), p.stem().string());
}

LayerDag dag_from_config(const ExperimentConfig& config) {
  return build_dag(config.dag.node_count, config.dag.arcs);
}

std::unique_ptr<DistortionModel> model_from_config(const ExperimentConfig& config,
                                                   const LayerDag& dag) {
  if (config.model.kind == ModelKind::layered_exponential) {
    std::vector<double> bases = config.model.bases;
    if (bases.empty()) bases.assign(dag.node_count(), 1.0);
    std::vector<std::map<int, double>> gains = config.model.gains;
    if (gains.empty()) gains.assign(dag.node_count(), {});
    return std::make_unique<LayeredExponentialModel>(dag, std::move(bases), gains);
  }
  auto model = std::make_unique<TabulatedModel>(config.model.table_rows, config.grid_step);
  if (model->resolution_count() != dag.node_count()) {
    throw SchemaError("tabulated model width " + std::to_string(model->resolution_count()) +
                      " does not match node count " + std::to_string(dag.node_count()));
  }
  return model;
}

std::vector<TabulatedModel::Row> load_table_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open table file " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("table file " + path + " is empty");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  std::vector<std::string> columns;
  std::stringstream head(header);
  std::string cell;
  while (std::getline(head, cell, ',')) columns.push_back(cell);
  if (columns.size() < 2 || columns.size() % 2 != 0) {
    throw SchemaError("table header must hold b_* columns followed by g_* columns");
  }
  size_t n = columns.size() / 2;
  for (size_t i = 0; i < n; ++i) {
    std::string want_b = "b_" + std::to_string(i);
    std::string want_g = "g_" + std::to_string(i);
    if (columns[i] != want_b || columns[n + i] != want_g) {
      throw SchemaError("table header column " + std::to_string(i) + " must be " + want_b +
                        " and column " + std::to_string(n + i) + " must be " + want_g);
    }
  }

  std::vector<TabulatedModel::Row> rows;
  std::string line;
  size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::vector<double> values;
    while (std::getline(fields, cell, ',')) {
      try {
        size_t consumed = 0;
        values.push_back(std::stod(cell, &consumed));
        if (consumed != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("table " + path + " line " + std::to_string(line_number) +
                         ": \"" + cell + "\" is not a number");
      }
    }
    if (values.size() != columns.size()) {
      throw ParseError("table " + path + " line " + std::to_string(line_number) + " has " +
                       std::to_string(values.size()) + " fields, expected " +
                       std::to_string(columns.size()));
    }
    TabulatedModel::Row row;
    row.bits.assign(values.begin(), values.begin() + n);
    row.distortions.assign(values.begin() + n, values.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bitalloc
