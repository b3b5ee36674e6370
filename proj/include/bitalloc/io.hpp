#pragma once

#include <string>

#include "json.hpp"

#include "bitalloc/conditions.hpp"
#include "bitalloc/graph.hpp"
#include "bitalloc/pareto.hpp"
#include "bitalloc/scalarize.hpp"

namespace bitalloc {

using Json = nlohmann::ordered_json;

// Presentation-only transform: report 10*log10(peak^2 / d) instead of raw
// distortions. Never fed back into any computation.
struct DisplayOptions {
  bool psnr = false;
  double peak = 255.0;
};

// Shortest round-trip decimal form.
std::string format_double(double value);

double display_value(double distortion, const DisplayOptions& display);
std::string distortion_column(size_t index, const DisplayOptions& display);

// Writes through a temp file in the same directory plus rename, creating
// parent directories as needed.
void atomic_write(const std::string& path, const std::string& content);

std::string cloud_csv(const PointCloud& cloud, const DisplayOptions& display = {});
std::string front_csv(const ParetoFront& front, const DisplayOptions& display = {});
Json front_json(const ParetoFront& front, const DisplayOptions& display = {});
std::string sweep_csv(const S0Set& s0, const DisplayOptions& display = {});
Json sweep_json(const S0Set& s0, const DisplayOptions& display = {});
Json condition_json(const ConditionReport& report);
Json coverage_json(const CoverageReport& report, const DisplayOptions& display = {});
Json validate_json(const LayerDag& dag);

// Plot-ready pair: the weak front sorted lexicographically, and the distinct
// sweep minimizers.
std::string plot_front_csv(const ParetoFront& front, const DisplayOptions& display = {});
std::string plot_s0_csv(const S0Set& s0, const DisplayOptions& display = {});

}  // namespace bitalloc
