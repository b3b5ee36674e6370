#include "bitalloc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bitalloc {

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

double display_value(double distortion, const DisplayOptions& display) {
  if (!display.psnr) return distortion;
  return 10.0 * std::log10(display.peak * display.peak / distortion);
}

std::string distortion_column(size_t index, const DisplayOptions& display) {
  return (display.psnr ? "psnr_" : "g_") + std::to_string(index);
}

void atomic_write(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) throw Error(ErrorCode::io, "cannot create directory " + target.parent_path().string());
  }
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open " + temp.string() + " for writing");
    out << content;
    if (!out.flush()) throw Error(ErrorCode::io, "short write to " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) throw Error(ErrorCode::io, "cannot move " + temp.string() + " into place");
}

namespace {

void append_point_row(std::ostringstream& out, const CloudPoint& point,
                      const DisplayOptions& display) {
  for (double b : point.allocation.bits) out << format_double(b) << ",";
  const std::vector<double>& values = point.distortion.values;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out << ",";
    out << format_double(display_value(values[i], display));
  }
}

void append_header(std::ostringstream& out, size_t n, const DisplayOptions& display) {
  for (size_t i = 0; i < n; ++i) out << "b_" << i << ",";
  for (size_t i = 0; i < n; ++i) out << (i ? "," : "") << distortion_column(i, display);
}

Json point_json(const CloudPoint& point, const DisplayOptions& display) {
  Json record;
  record["bits"] = point.allocation.bits;
  Json values = Json::array();
  for (double v : point.distortion.values) values.push_back(display_value(v, display));
  record[display.psnr ? "psnr" : "distortion"] = std::move(values);
  return record;
}

}  // namespace

std::string cloud_csv(const PointCloud& cloud, const DisplayOptions& display) {
  std::ostringstream out;
  size_t n = cloud.points.empty() ? 0 : cloud.points[0].allocation.bits.size();
  append_header(out, n, display);
  out << "\n";
  for (const CloudPoint& point : cloud.points) {
    append_point_row(out, point, display);
    out << "\n";
  }
  return out.str();
}

std::string front_csv(const ParetoFront& front, const DisplayOptions& display) {
  std::ostringstream out;
  size_t n = front.points.empty() ? 0 : front.points[0].point.allocation.bits.size();
  append_header(out, n, display);
  out << ",label\n";
  for (const LabeledPoint& labeled : front.points) {
    append_point_row(out, labeled.point, display);
    out << "," << point_label_name(labeled.label) << "\n";
  }
  return out.str();
}

Json front_json(const ParetoFront& front, const DisplayOptions& display) {
  Json doc;
  doc["budget"] = front.budget;
  doc["grid_step"] = front.grid_step;
  doc["point_count"] = front.points.size();
  doc["pareto_count"] = front.pareto_count();
  doc["weak_count"] = front.weak_count();
  Json points = Json::array();
  for (const LabeledPoint& labeled : front.points) {
    Json record = point_json(labeled.point, display);
    record["label"] = point_label_name(labeled.label);
    points.push_back(std::move(record));
  }
  doc["points"] = std::move(points);
  return doc;
}

std::string sweep_csv(const S0Set& s0, const DisplayOptions& display) {
  std::ostringstream out;
  size_t n = s0.entries.empty() ? 0 : s0.entries[0].weight.dimension();
  for (size_t i = 0; i < n; ++i) out << "w_" << i << ",";
  out << "objective";
  for (size_t i = 0; i < n; ++i) out << ",b_" << i;
  for (size_t i = 0; i < n; ++i) out << "," << distortion_column(i, display);
  out << "\n";
  for (const ScalarizationResult& entry : s0.entries) {
    for (double w : entry.weight.values()) out << format_double(w) << ",";
    out << format_double(entry.objective);
    const CloudPoint& first = entry.minimizers.front();
    for (double b : first.allocation.bits) out << "," << format_double(b);
    for (double v : first.distortion.values) {
      out << "," << format_double(display_value(v, display));
    }
    out << "\n";
  }
  return out.str();
}

Json sweep_json(const S0Set& s0, const DisplayOptions& display) {
  Json doc;
  doc["weight_resolution"] = s0.weight_resolution;
  Json entries = Json::array();
  for (const ScalarizationResult& entry : s0.entries) {
    Json record;
    record["weight"] = entry.weight.values();
    record["objective"] = entry.objective;
    Json ties = Json::array();
    for (const CloudPoint& minimizer : entry.minimizers) {
      ties.push_back(point_json(minimizer, display));
    }
    record["minimizers"] = std::move(ties);
    if (!entry.minimizer_indices.empty()) record["minimizer_indices"] = entry.minimizer_indices;
    entries.push_back(std::move(record));
  }
  doc["entries"] = std::move(entries);
  Json distinct = Json::array();
  for (const DistortionVector& d : s0.distinct_distortions) {
    Json values = Json::array();
    for (double v : d.values) values.push_back(display_value(v, display));
    distinct.push_back(std::move(values));
  }
  doc["distinct_distortions"] = std::move(distinct);
  return doc;
}

Json condition_json(const ConditionReport& report) {
  Json doc;
  doc["check_name"] = report.check_name;
  doc["passed"] = report.passed;
  doc["tolerance"] = report.tolerance;
  doc["summary"] = report.summary;
  Json witnesses = Json::array();
  for (const WitnessRecord& w : report.witnesses) {
    Json record;
    record["kind"] = w.kind;
    record["detail"] = w.detail;
    record["points"] = w.points;
    record["magnitude"] = w.magnitude;
    witnesses.push_back(std::move(record));
  }
  doc["witnesses"] = std::move(witnesses);
  return doc;
}

Json coverage_json(const CoverageReport& report, const DisplayOptions& display) {
  Json doc;
  doc["weak_pareto_count"] = report.weak_pareto_count;
  doc["covered_count"] = report.covered_count;
  doc["match_tolerance"] = report.match_tolerance;
  Json missed = Json::array();
  for (const DistortionVector& d : report.missed) {
    Json values = Json::array();
    for (double v : d.values) values.push_back(display_value(v, display));
    missed.push_back(std::move(values));
  }
  doc["missed"] = std::move(missed);
  return doc;
}

Json validate_json(const LayerDag& dag) {
  Json doc;
  doc["node_count"] = dag.node_count();
  Json arcs = Json::array();
  for (const Arc& arc : dag.arcs()) arcs.push_back(Json::array({arc.from, arc.to}));
  doc["arcs"] = std::move(arcs);
  doc["topological_order"] = dag.topological_order();
  Json subgraphs = Json::array();
  for (const ResolutionSubgraph& sub : dag.subgraphs()) {
    Json record;
    record["resolution"] = sub.resolution;
    record["members"] = sub.members;
    record["parents"] = sub.parent_set;
    subgraphs.push_back(std::move(record));
  }
  doc["subgraphs"] = std::move(subgraphs);
  return doc;
}

std::string plot_front_csv(const ParetoFront& front, const DisplayOptions& display) {
  std::vector<const LabeledPoint*> weak;
  for (const LabeledPoint& labeled : front.points) {
    if (labeled.label != PointLabel::dominated) weak.push_back(&labeled);
  }
  std::stable_sort(weak.begin(), weak.end(), [](const LabeledPoint* a, const LabeledPoint* b) {
    return a->point.distortion.values < b->point.distortion.values;
  });
  std::ostringstream out;
  size_t n = weak.empty() ? 0 : weak[0]->point.distortion.values.size();
  for (size_t i = 0; i < n; ++i) out << (i ? "," : "") << distortion_column(i, display);
  out << ",label\n";
  for (const LabeledPoint* labeled : weak) {
    const std::vector<double>& values = labeled->point.distortion.values;
    for (size_t i = 0; i < n; ++i) {
      if (i) out << ",";
      out << format_double(display_value(values[i], display));
    }
    out << "," << point_label_name(labeled->label) << "\n";
  }
  return out.str();
}

std::string plot_s0_csv(const S0Set& s0, const DisplayOptions& display) {
  std::ostringstream out;
  size_t n = s0.distinct_distortions.empty() ? 0 : s0.distinct_distortions[0].values.size();
  for (size_t i = 0; i < n; ++i) out << (i ? "," : "") << distortion_column(i, display);
  out << "\n";
  for (const DistortionVector& d : s0.distinct_distortions) {
    for (size_t i = 0; i < n; ++i) {
      if (i) out << ",";
      out << format_double(display_value(d.values[i], display));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace bitalloc
