#include "bitalloc.h"

#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bitalloc/config.hpp"
#include "bitalloc/fixtures.hpp"
#include "bitalloc/io.hpp"
#include "bitalloc/runner.hpp"
#include "bitalloc/scalarize.hpp"

using bitalloc::ErrorCode;

struct ba_config {
  bitalloc::ExperimentConfig value;
};
struct ba_dag {
  bitalloc::LayerDag value;
};
struct ba_model {
  std::unique_ptr<bitalloc::DistortionModel> value;
};
struct ba_cloud {
  bitalloc::PointCloud value;
};
struct ba_front {
  bitalloc::ParetoFront value;
};

namespace {

// The C enum mirrors ErrorCode value for value.
static_assert(static_cast<int>(BA_OK) == static_cast<int>(ErrorCode::ok));
static_assert(static_cast<int>(BA_CYCLE) == static_cast<int>(ErrorCode::cycle));
static_assert(static_cast<int>(BA_OFF_GRID) == static_cast<int>(ErrorCode::off_grid));
static_assert(static_cast<int>(BA_PARSE) == static_cast<int>(ErrorCode::parse));
static_assert(static_cast<int>(BA_SCHEMA) == static_cast<int>(ErrorCode::schema));
static_assert(static_cast<int>(BA_UNKNOWN) == static_cast<int>(ErrorCode::unknown));

thread_local std::string g_last_error;

ba_status fail(ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<ba_status>(code);
}

template <typename Fn>
ba_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BA_OK;
  } catch (const bitalloc::Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::unknown, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool condition, const char* message) {
  if (!condition) throw bitalloc::Error(ErrorCode::invalid_argument, message);
}

}  // namespace

extern "C" {

const char* ba_status_name(ba_status status) {
  return bitalloc::error_code_name(static_cast<ErrorCode>(status));
}

int ba_exit_code(ba_status status) {
  if (status == BA_OK) return 0;
  return bitalloc::error_exit_code(static_cast<ErrorCode>(status));
}

const char* ba_last_error(void) { return g_last_error.c_str(); }

void ba_string_free(char* s) { delete[] s; }

const char* ba_version(void) { return "1.0.0"; }

ba_status ba_config_load(const char* path, ba_config** out) {
  return guarded([&] {
    require(path && out, "ba_config_load needs a path and an out pointer");
    *out = new ba_config{bitalloc::parse_config(path)};
  });
}

ba_status ba_config_load_text(const char* text, const char* base_dir, ba_config** out) {
  return guarded([&] {
    require(text && out, "ba_config_load_text needs text and an out pointer");
    *out = new ba_config{
        bitalloc::parse_config_text(text, base_dir ? base_dir : ".", "inline")};
  });
}

ba_status ba_config_fixture(const char* name, ba_config** out) {
  return guarded([&] {
    require(name && out, "ba_config_fixture needs a name and an out pointer");
    *out = new ba_config{bitalloc::fixture_config(name)};
  });
}

ba_status ba_fixture_names(char** out) {
  return guarded([&] {
    require(out, "ba_fixture_names needs an out pointer");
    std::string joined;
    for (const std::string& name : bitalloc::fixture_names()) {
      joined += name;
      joined += '\n';
    }
    *out = dup_string(joined);
  });
}

ba_status ba_config_name(const ba_config* config, char** out) {
  return guarded([&] {
    require(config && out, "ba_config_name needs a config and an out pointer");
    *out = dup_string(config->value.name);
  });
}

void ba_config_free(ba_config* config) { delete config; }

ba_status ba_dag_build(const ba_config* config, ba_dag** out) {
  return guarded([&] {
    require(config && out, "ba_dag_build needs a config and an out pointer");
    *out = new ba_dag{bitalloc::dag_from_config(config->value)};
  });
}

void ba_dag_free(ba_dag* dag) { delete dag; }

int ba_dag_node_count(const ba_dag* dag) { return dag ? dag->value.node_count() : 0; }

ba_status ba_dag_validate_json(const ba_dag* dag, char** out) {
  return guarded([&] {
    require(dag && out, "ba_dag_validate_json needs a dag and an out pointer");
    *out = dup_string(bitalloc::validate_json(dag->value).dump(2));
  });
}

ba_status ba_model_build(const ba_config* config, const ba_dag* dag, ba_model** out) {
  return guarded([&] {
    require(config && dag && out, "ba_model_build needs a config, a dag, and an out pointer");
    *out = new ba_model{bitalloc::model_from_config(config->value, dag->value)};
  });
}

void ba_model_free(ba_model* model) { delete model; }

ba_status ba_model_evaluate(const ba_model* model, const ba_dag* dag, const double* bits,
                            int count, double* out) {
  return guarded([&] {
    require(model && dag && bits && out, "ba_model_evaluate needs model, dag, bits, and out");
    require(count == dag->value.node_count(), "bit count must equal the node count");
    bitalloc::BitAllocation alloc;
    alloc.bits.assign(bits, bits + count);
    double total = 0.0;
    for (int i = 0; i < count; ++i) total += bits[i];
    alloc.budget = total;  // pure model map; budget feasibility is the caller's concern
    bitalloc::DistortionVector d = model->value->evaluate(alloc);
    for (int i = 0; i < count; ++i) out[i] = d.values[static_cast<size_t>(i)];
  });
}

ba_status ba_enumerate(const ba_model* model, const ba_dag* dag, double budget,
                       double grid_step, ba_cloud** out) {
  return guarded([&] {
    require(model && dag && out, "ba_enumerate needs a model, a dag, and an out pointer");
    *out = new ba_cloud{bitalloc::enumerate_grid(*model->value, dag->value, budget, grid_step)};
  });
}

void ba_cloud_free(ba_cloud* cloud) { delete cloud; }

int ba_cloud_size(const ba_cloud* cloud) {
  return cloud ? static_cast<int>(cloud->value.points.size()) : 0;
}

ba_status ba_cloud_point(const ba_cloud* cloud, int index, double* bits, double* distortion) {
  return guarded([&] {
    require(cloud, "ba_cloud_point needs a cloud");
    if (index < 0 || static_cast<size_t>(index) >= cloud->value.points.size()) {
      throw bitalloc::IndexError("cloud point index out of range");
    }
    const bitalloc::CloudPoint& p = cloud->value.points[static_cast<size_t>(index)];
    if (bits) {
      for (size_t i = 0; i < p.allocation.bits.size(); ++i) bits[i] = p.allocation.bits[i];
    }
    if (distortion) {
      for (size_t i = 0; i < p.distortion.values.size(); ++i) distortion[i] = p.distortion.values[i];
    }
  });
}

ba_status ba_filter_front(const ba_cloud* cloud, double eps, ba_front** out) {
  return guarded([&] {
    require(cloud && out, "ba_filter_front needs a cloud and an out pointer");
    *out = new ba_front{bitalloc::filter_front(cloud->value, eps)};
  });
}

void ba_front_free(ba_front* front) { delete front; }

ba_status ba_front_counts(const ba_front* front, int* pareto_count, int* weak_count,
                          int* total_count) {
  return guarded([&] {
    require(front, "ba_front_counts needs a front");
    if (pareto_count) *pareto_count = static_cast<int>(front->value.pareto_count());
    if (weak_count) *weak_count = static_cast<int>(front->value.weak_count());
    if (total_count) *total_count = static_cast<int>(front->value.points.size());
  });
}

ba_status ba_front_label(const ba_front* front, int index, int* out) {
  return guarded([&] {
    require(front && out, "ba_front_label needs a front and an out pointer");
    if (index < 0 || static_cast<size_t>(index) >= front->value.points.size()) {
      throw bitalloc::IndexError("front point index out of range");
    }
    *out = static_cast<int>(front->value.points[static_cast<size_t>(index)].label);
  });
}

ba_status ba_scalarize_discrete(const ba_cloud* cloud, const double* weights, int count,
                                char** out) {
  return guarded([&] {
    require(cloud && weights && out, "ba_scalarize_discrete needs cloud, weights, and out");
    bitalloc::WeightVector weight(std::vector<double>(weights, weights + count));
    bitalloc::ScalarizationResult result = bitalloc::scalarize_discrete(weight, cloud->value);
    bitalloc::Json doc;
    doc["weight"] = weight.values();
    doc["objective"] = result.objective;
    doc["minimizer_indices"] = result.minimizer_indices;
    bitalloc::Json minimizers = bitalloc::Json::array();
    for (const bitalloc::CloudPoint& m : result.minimizers) {
      bitalloc::Json record;
      record["bits"] = m.allocation.bits;
      record["distortion"] = m.distortion.values;
      minimizers.push_back(std::move(record));
    }
    doc["minimizers"] = std::move(minimizers);
    *out = dup_string(doc.dump(2));
  });
}

ba_status ba_run(const ba_config* config, const char* subcommand, const char* options_json,
                 int* exit_code, char** report_json) {
  return guarded([&] {
    require(config && subcommand, "ba_run needs a config and a subcommand");
    bitalloc::RunOptions options;
    if (options_json && *options_json) {
      bitalloc::Json doc;
      try {
        doc = bitalloc::Json::parse(options_json);
      } catch (const std::exception& e) {
        throw bitalloc::ParseError(std::string("options JSON: ") + e.what());
      }
      if (!doc.is_object()) throw bitalloc::ParseError("options JSON must be an object");
      for (const auto& [key, value] : doc.items()) {
        if (key == "weights") {
          if (!value.is_array()) throw bitalloc::SchemaError("options.weights must be an array");
          options.weights = value.get<std::vector<double>>();
        } else if (key == "output_directory") {
          options.output_directory = value.get<std::string>();
        } else if (key == "psnr") {
          options.psnr = value.get<bool>();
        } else if (key == "eps") {
          options.eps = value.get<double>();
        } else {
          throw bitalloc::SchemaError("unknown run option \"" + key + "\"");
        }
      }
    }
    bitalloc::RunResult result = bitalloc::run(subcommand, config->value, options);
    if (exit_code) *exit_code = result.exit_code;
    if (report_json) {
      bitalloc::Json doc;
      doc["subcommand"] = subcommand;
      doc["exit_code"] = result.exit_code;
      doc["files"] = result.files;
      doc["report"] = result.report;
      *report_json = dup_string(doc.dump(2));
    }
  });
}

}  // extern "C"
