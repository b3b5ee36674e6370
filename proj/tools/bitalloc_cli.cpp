// Command-line front end. Talks to the library exclusively through the C ABI
// in bitalloc.h; everything here is presentation.

#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bitalloc.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct Args {
  std::string config_path;
  std::string fixture;
  std::string weights_text;
  std::string out_dir;
  bool psnr = false;
  double eps = 0.0;
  long long seed = 0;  // reserved for future stochastic solvers; accepted, unused
};

int fail(ba_status status) {
  std::fprintf(stderr, "bitalloc: error[%s]: %s\n", ba_status_name(status), ba_last_error());
  return ba_exit_code(status);
}

int fail_usage(const std::string& message) {
  std::fprintf(stderr, "bitalloc: error[invalid_argument]: %s\n", message.c_str());
  return 1;
}

// --weights 0.5,0.25,0.25
bool parse_weights(const std::string& text, std::vector<double>& out) {
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      size_t used = 0;
      double value = std::stod(item, &used);
      if (used != item.size()) return false;
      out.push_back(value);
    } catch (const std::exception&) {
      return false;
    }
  }
  return !out.empty();
}

void print_condition_lines(const Json& check) {
  for (const Json& entry : check.at("checks")) {
    std::printf("  %-24s %s  %s\n", entry.at("check_name").get<std::string>().c_str(),
                entry.at("passed").get<bool>() ? "pass" : "FAIL",
                entry.at("summary").get<std::string>().c_str());
  }
  if (check.contains("bounding_box_skipped")) {
    std::printf("  %-24s skipped  %s\n", "bounding_box",
                check.at("bounding_box_skipped").get<std::string>().c_str());
  }
}

void print_section(const std::string& subcommand, const Json& report) {
  if (subcommand == "validate") {
    std::printf("graph ok: %d nodes, %zu arcs, topological order",
                report.at("node_count").get<int>(), report.at("arcs").size());
    for (const Json& node : report.at("topological_order")) {
      std::printf(" %d", node.get<int>());
    }
    std::printf("\n");
  } else if (subcommand == "enumerate") {
    std::printf("enumerated %zu allocations (budget %g, grid step %g)\n",
                report.at("point_count").get<size_t>(), report.at("budget").get<double>(),
                report.at("grid_step").get<double>());
  } else if (subcommand == "front") {
    size_t total = report.at("point_count").get<size_t>();
    size_t pareto = report.at("pareto_count").get<size_t>();
    size_t weak = report.at("weak_count").get<size_t>();
    std::printf("front: %zu pareto, %zu weak-only, %zu dominated (of %zu points)\n", pareto,
                weak - pareto, total - weak, total);
  } else if (subcommand == "scalarize") {
    const Json& discrete = report.at("discrete");
    std::printf("discrete objective %.17g with %zu minimizer(s)\n",
                discrete.at("objective").get<double>(), discrete.at("minimizers").size());
    if (report.contains("continuous")) {
      std::printf("continuous objective %.17g\n", report.at("continuous").at("objective").get<double>());
    }
  } else if (subcommand == "sweep") {
    std::printf("swept %zu weight vectors, %zu distinct minimizer distortions\n",
                report.at("entries").size(), report.at("distinct_distortions").size());
  } else if (subcommand == "check") {
    print_condition_lines(report);
    std::printf("checks %s\n", report.at("passed").get<bool>() ? "passed" : "FAILED");
  } else if (subcommand == "compare") {
    std::printf("scalarization covers %zu of %zu weak points (match tolerance %g)\n",
                report.at("covered_count").get<size_t>(),
                report.at("weak_pareto_count").get<size_t>(),
                report.at("match_tolerance").get<double>());
  }
}

int run_subcommand(const std::string& subcommand, const Args& args) {
  if (args.config_path.empty() && args.fixture.empty()) {
    return fail_usage(subcommand == "demo" ? "demo needs --fixture NAME"
                                           : "give either --config FILE or --fixture NAME");
  }

  ba_config* config = nullptr;
  ba_status status = args.fixture.empty()
                         ? ba_config_load(args.config_path.c_str(), &config)
                         : ba_config_fixture(args.fixture.c_str(), &config);
  if (status != BA_OK) return fail(status);
  std::unique_ptr<ba_config, void (*)(ba_config*)> config_guard(config, ba_config_free);

  Json options;
  if (!args.weights_text.empty()) {
    std::vector<double> weights;
    if (!parse_weights(args.weights_text, weights)) {
      return fail_usage("--weights wants a comma-separated list of numbers");
    }
    options["weights"] = weights;
  }
  if (!args.out_dir.empty()) options["output_directory"] = args.out_dir;
  if (args.psnr) options["psnr"] = true;
  if (args.eps != 0.0) options["eps"] = args.eps;

  int exit_code = 0;
  char* report_text = nullptr;
  status = ba_run(config, subcommand.c_str(), options.empty() ? nullptr : options.dump().c_str(),
                  &exit_code, &report_text);
  if (status != BA_OK) return fail(status);
  std::unique_ptr<char, void (*)(char*)> report_guard(report_text, ba_string_free);

  Json doc = Json::parse(report_text);
  const Json& report = doc.at("report");
  if (subcommand == "demo") {
    std::printf("demo: %s\n", report.at("fixture").get<std::string>().c_str());
    for (const char* stage : {"validate", "enumerate", "front", "sweep"}) {
      print_section(stage, report.at(stage));
    }
    print_section("check", report.at("check"));
    print_section("compare", report.at("compare"));
  } else {
    print_section(subcommand, report);
  }
  for (const Json& file : doc.at("files")) {
    std::printf("wrote %s\n", file.get<std::string>().c_str());
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective bit allocation for layered coding: enumerate rate allocations "
               "over a dependency graph, filter Pareto fronts, sweep scalarizations, and check "
               "front-shape conditions."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("bitalloc ") + ba_version());

  Args args;
  struct Sub {
    const char* name;
    const char* help;
    bool takes_weights;
    bool fixture_only;
  };
  const Sub subs[] = {
      {"validate", "Validate the dependency graph and report its structure", false, false},
      {"enumerate", "Enumerate the feasible allocation grid and its distortions", false, false},
      {"front", "Label every enumerated point by Pareto dominance", false, false},
      {"scalarize", "Minimize one weighted sum of distortions (needs --weights)", true, false},
      {"sweep", "Scalarize across the whole simplex weight lattice", false, false},
      {"check", "Run the front-shape and label-consistency checks", false, false},
      {"compare", "Compare scalarization minimizers against the weak Pareto front", false, false},
      {"demo", "Full pipeline on a built-in fixture (needs --fixture)", false, true},
  };

  std::vector<CLI::App*> parsed;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    if (!sub.fixture_only) {
      cmd->add_option("--config", args.config_path, "Experiment config JSON file");
    }
    cmd->add_option("--fixture", args.fixture, "Built-in fixture name (see `bitalloc fixtures`)");
    if (sub.takes_weights) {
      cmd->add_option("--weights", args.weights_text,
                      "Comma-separated scalarization weights, one per resolution");
    }
    cmd->add_option("--out", args.out_dir, "Output directory (overrides the config)");
    cmd->add_flag("--psnr", args.psnr, "Report log-scale quality instead of raw distortion");
    cmd->add_option("--eps", args.eps, "Dominance slack for Pareto filtering");
    cmd->add_option("--seed", args.seed,
                    "Reserved for future stochastic solvers; accepted and ignored");
    parsed.push_back(cmd);
  }
  CLI::App* fixtures_cmd = app.add_subcommand("fixtures", "List built-in fixture names");

  // Usage problems exit 1 like any other input error; CLI11's own exit codes
  // would leak numbers outside the documented 0/1/2/3 set.
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (fixtures_cmd->parsed()) {
    char* names = nullptr;
    ba_status status = ba_fixture_names(&names);
    if (status != BA_OK) return fail(status);
    std::printf("%s", names);
    ba_string_free(names);
    return 0;
  }
  for (size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i]->parsed()) return run_subcommand(subs[i].name, args);
  }
  return fail_usage("no subcommand given");
}
