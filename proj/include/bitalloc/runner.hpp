#pragma once

#include <string>
#include <vector>

#include "bitalloc/config.hpp"
#include "bitalloc/io.hpp"

namespace bitalloc {

struct RunOptions {
  std::vector<double> weights;    // scalarize subcommand input
  std::string output_directory;   // overrides config outputs.directory when set
  bool psnr = false;
  double eps = 0.0;               // dominance slack for front filtering
};

struct RunResult {
  int exit_code = 0;              // 0 ok, 2 a requested check failed
  Json report;
  std::vector<std::string> files;
};

// Executes one subcommand of {validate, enumerate, front, scalarize, sweep,
// check, compare, demo} against a config, writing artifacts in the formats
// the config asks for. Input problems surface as exceptions; a failed check
// is a result, not an exception.
RunResult run(const std::string& subcommand, const ExperimentConfig& config,
              const RunOptions& options = {});

// Exit code an error belongs to: 3 for config parse/schema problems, 1 for
// everything else.
int error_exit_code(ErrorCode code);

}  // namespace bitalloc
