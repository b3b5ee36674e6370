#pragma once

#include <vector>

#include "bitalloc/pareto.hpp"

namespace bitalloc {

// Nonnegative weights over resolutions, normalized to sum 1. At least one
// entry must be positive before normalization.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> raw);

  const std::vector<double>& values() const { return values_; }
  size_t dimension() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// Simplex lattice {k / resolution : k integer, k >= 0, sum k = resolution},
// ascending lexicographic in k.
std::vector<WeightVector> weight_lattice(int dimension, int resolution);

inline constexpr double kDefaultTieTolerance = 1e-12;
inline constexpr double kDefaultDistinctTolerance = 1e-9;

struct ScalarizationResult {
  WeightVector weight;
  double objective = 0.0;
  // Every minimizer within tie tolerance of the optimum. Indices refer to the
  // scalarized cloud, ascending; empty for continuous solves.
  std::vector<size_t> minimizer_indices;
  std::vector<CloudPoint> minimizers;
};

// Minimum of sum(w_i * g_i) over the cloud, with the full tie set.
ScalarizationResult scalarize_discrete(const WeightVector& weight, const PointCloud& cloud,
                                       double tie_tolerance = kDefaultTieTolerance);

struct ContinuousOptions {
  // Fixed-point residual target. Near a corner optimum the objective is flat
  // to machine precision within ~sqrt(eps) of the minimizer, so residuals
  // much below 1e-7 are not reliably attainable in double precision.
  double tolerance = 1e-7;
  long long max_iterations = 100000;
};

// Projected gradient descent over {b >= 0, sum b <= budget} with Armijo
// backtracking. Layered exponential models only (the objective is convex
// there); throws NotConvexModel otherwise and NoConvergence (carrying the
// final residual) if the iteration cap is hit.
ScalarizationResult scalarize_continuous(const WeightVector& weight, const DistortionModel& model,
                                         const LayerDag& dag, double budget,
                                         const ContinuousOptions& options = {});

// Euclidean projection onto {x >= 0, sum x <= budget}.
std::vector<double> project_to_budget(std::vector<double> x, double budget);

// Scalarization minimizers across a whole weight lattice, plus the deduplied
// set of attained distortion vectors in first-seen order.
struct S0Set {
  int weight_resolution = 0;
  std::vector<ScalarizationResult> entries;
  std::vector<DistortionVector> distinct_distortions;
};

S0Set sweep_S0(const PointCloud& cloud, int weight_resolution,
               double tie_tolerance = kDefaultTieTolerance,
               double distinct_tolerance = kDefaultDistinctTolerance);

S0Set sweep_S0_continuous(const DistortionModel& model, const LayerDag& dag, double budget,
                          int weight_resolution, const ContinuousOptions& options = {},
                          double distinct_tolerance = kDefaultDistinctTolerance);

}  // namespace bitalloc
