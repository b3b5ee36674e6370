#include "bitalloc/runner.hpp"

#include <filesystem>
#include <memory>

#include "bitalloc/conditions.hpp"

namespace bitalloc {

namespace {

struct Workspace {
  const ExperimentConfig& config;
  const RunOptions& options;
  LayerDag dag;
  std::unique_ptr<DistortionModel> model;
  DisplayOptions display;
  std::string out_dir;

  Workspace(const ExperimentConfig& cfg, const RunOptions& opts)
      : config(cfg),
        options(opts),
        dag(dag_from_config(cfg)),
        model(model_from_config(cfg, dag)) {
    display.psnr = opts.psnr;
    out_dir = opts.output_directory.empty() ? cfg.outputs.directory : opts.output_directory;
  }

  void write(RunResult& result, const std::string& filename, const std::string& content) const {
    std::string full = (std::filesystem::path(out_dir) / filename).string();
    atomic_write(full, content);
    result.files.push_back(full);
  }
};

Json do_validate(const Workspace& ws, RunResult& result) {
  Json report = validate_json(ws.dag);
  if (ws.config.wants_format("json")) {
    ws.write(result, "validate.json", report.dump(2) + "\n");
  }
  return report;
}

PointCloud make_cloud(const Workspace& ws) {
  return enumerate_grid(*ws.model, ws.dag, ws.config.budget, ws.config.grid_step);
}

Json do_enumerate(const Workspace& ws, RunResult& result, const PointCloud& cloud) {
  if (ws.config.wants_format("csv")) {
    ws.write(result, "cloud.csv", cloud_csv(cloud, ws.display));
  }
  Json report;
  report["budget"] = cloud.budget;
  report["grid_step"] = cloud.grid_step;
  report["point_count"] = cloud.points.size();
  return report;
}

Json do_front(const Workspace& ws, RunResult& result, const ParetoFront& front) {
  if (ws.config.wants_format("csv")) {
    ws.write(result, "front.csv", front_csv(front, ws.display));
  }
  Json report = front_json(front, ws.display);
  if (ws.config.wants_format("json")) {
    ws.write(result, "front.json", report.dump(2) + "\n");
  }
  if (ws.config.wants_format("plotdata")) {
    ws.write(result, "plot_front.csv", plot_front_csv(front, ws.display));
  }
  return report;
}

Json do_sweep(const Workspace& ws, RunResult& result, const S0Set& s0) {
  if (ws.config.wants_format("csv")) {
    ws.write(result, "sweep.csv", sweep_csv(s0, ws.display));
  }
  Json report = sweep_json(s0, ws.display);
  if (ws.config.wants_format("json")) {
    ws.write(result, "sweep.json", report.dump(2) + "\n");
  }
  if (ws.config.wants_format("plotdata")) {
    ws.write(result, "plot_s0.csv", plot_s0_csv(s0, ws.display));
  }
  return report;
}

Json do_scalarize(const Workspace& ws, RunResult& result, const PointCloud& cloud) {
  if (ws.options.weights.empty()) {
    throw Error(ErrorCode::invalid_argument,
                "scalarize needs weights (one per resolution, e.g. --weights 0.5,0.25,0.25)");
  }
  WeightVector weight(ws.options.weights);
  ScalarizationResult discrete = scalarize_discrete(weight, cloud, ws.config.tolerances.tie);

  Json report;
  report["weight"] = weight.values();
  Json discrete_json;
  discrete_json["objective"] = discrete.objective;
  discrete_json["minimizer_indices"] = discrete.minimizer_indices;
  Json minimizers = Json::array();
  for (const CloudPoint& m : discrete.minimizers) {
    Json record;
    record["bits"] = m.allocation.bits;
    Json values = Json::array();
    for (double v : m.distortion.values) values.push_back(display_value(v, ws.display));
    record[ws.display.psnr ? "psnr" : "distortion"] = std::move(values);
    minimizers.push_back(std::move(record));
  }
  discrete_json["minimizers"] = std::move(minimizers);
  report["discrete"] = std::move(discrete_json);

  if (ws.model->kind() == ModelKind::layered_exponential) {
    ScalarizationResult continuous =
        scalarize_continuous(weight, *ws.model, ws.dag, ws.config.budget);
    Json continuous_json;
    continuous_json["objective"] = continuous.objective;
    continuous_json["bits"] = continuous.minimizers.front().allocation.bits;
    Json values = Json::array();
    for (double v : continuous.minimizers.front().distortion.values) {
      values.push_back(display_value(v, ws.display));
    }
    continuous_json[ws.display.psnr ? "psnr" : "distortion"] = std::move(values);
    report["continuous"] = std::move(continuous_json);
  }
  if (ws.config.wants_format("json")) {
    ws.write(result, "scalarize.json", report.dump(2) + "\n");
  }
  return report;
}

Json do_check(const Workspace& ws, RunResult& result, const PointCloud& cloud,
              const ParetoFront& front, bool& any_failed) {
  std::vector<ConditionReport> reports;
  for (int res = 0; res < ws.dag.node_count(); ++res) {
    RdEnvelope envelope =
        rd_envelope(*ws.model, ws.dag, res, ws.config.budget, ws.config.grid_step);
    reports.push_back(check_envelope(envelope, ws.config.tolerances.envelope));
  }
  double gap = ws.config.tolerances.continuity_factor * ws.config.grid_step;
  reports.push_back(check_front_continuity(front, gap));

  Json doc;
  // The in-order box walk presumes a curve front, which two-resolution
  // problems guarantee; surface fronts get an explicit skip marker instead
  // of a misapplied check.
  bool box_applies = ws.dag.node_count() == 2;
  if (box_applies) {
    reports.push_back(check_bounding_box(front));
  } else {
    doc["bounding_box_skipped"] =
        "the in-order box property holds for two-resolution curve fronts; this front has " +
        std::to_string(ws.dag.node_count()) + " objectives";
  }

  std::vector<DistortionVector> distortions;
  distortions.reserve(cloud.points.size());
  for (const CloudPoint& p : cloud.points) distortions.push_back(p.distortion);
  reports.push_back(check_minkowski_convexity(distortions));
  reports.push_back(check_lemma1(front, ws.config.budget));

  Json checks = Json::array();
  any_failed = false;
  for (const ConditionReport& report : reports) {
    any_failed = any_failed || !report.passed;
    checks.push_back(condition_json(report));
  }
  doc["passed"] = !any_failed;
  doc["checks"] = std::move(checks);
  if (ws.config.wants_format("json")) {
    ws.write(result, "checks.json", doc.dump(2) + "\n");
  }
  return doc;
}

Json do_compare(const Workspace& ws, RunResult& result, const ParetoFront& front,
                const S0Set& s0) {
  CoverageReport coverage = compare_S0_vs_weak_pareto(s0, front, ws.config.match_tolerance());
  Json report = coverage_json(coverage, ws.display);
  if (ws.config.wants_format("json")) {
    ws.write(result, "coverage.json", report.dump(2) + "\n");
  }
  return report;
}

}  // namespace

int error_exit_code(ErrorCode code) {
  if (code == ErrorCode::parse || code == ErrorCode::schema) return 3;
  return 1;
}

RunResult run(const std::string& subcommand, const ExperimentConfig& config,
              const RunOptions& options) {
  Workspace ws(config, options);
  RunResult result;

  if (subcommand == "validate") {
    result.report = do_validate(ws, result);
    return result;
  }
  if (subcommand == "enumerate") {
    PointCloud cloud = make_cloud(ws);
    result.report = do_enumerate(ws, result, cloud);
    return result;
  }
  if (subcommand == "front") {
    ParetoFront front = filter_front(make_cloud(ws), options.eps);
    result.report = do_front(ws, result, front);
    return result;
  }
  if (subcommand == "scalarize") {
    PointCloud cloud = make_cloud(ws);
    result.report = do_scalarize(ws, result, cloud);
    return result;
  }
  if (subcommand == "sweep") {
    PointCloud cloud = make_cloud(ws);
    S0Set s0 = sweep_S0(cloud, config.weight_resolution, config.tolerances.tie);
    result.report = do_sweep(ws, result, s0);
    return result;
  }
  if (subcommand == "check") {
    PointCloud cloud = make_cloud(ws);
    ParetoFront front = filter_front(cloud, options.eps);
    bool any_failed = false;
    result.report = do_check(ws, result, cloud, front, any_failed);
    if (any_failed) result.exit_code = 2;
    return result;
  }
  if (subcommand == "compare") {
    PointCloud cloud = make_cloud(ws);
    ParetoFront front = filter_front(cloud, options.eps);
    S0Set s0 = sweep_S0(cloud, config.weight_resolution, config.tolerances.tie);
    result.report = do_compare(ws, result, front, s0);
    return result;
  }
  if (subcommand == "demo") {
    PointCloud cloud = make_cloud(ws);
    ParetoFront front = filter_front(cloud, options.eps);
    S0Set s0 = sweep_S0(cloud, config.weight_resolution, config.tolerances.tie);
    Json report;
    report["fixture"] = config.name;
    report["validate"] = do_validate(ws, result);
    report["enumerate"] = do_enumerate(ws, result, cloud);
    report["front"] = do_front(ws, result, front);
    report["sweep"] = do_sweep(ws, result, s0);
    bool any_failed = false;
    report["check"] = do_check(ws, result, cloud, front, any_failed);
    report["compare"] = do_compare(ws, result, front, s0);
    result.report = std::move(report);
    if (any_failed) result.exit_code = 2;
    return result;
  }
  throw Error(ErrorCode::invalid_argument,
              "unknown subcommand \"" + subcommand +
                  "\" (expected validate, enumerate, front, scalarize, sweep, check, compare, "
                  "or demo)");
}

}  // namespace bitalloc
