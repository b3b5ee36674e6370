#include "bitalloc/scalarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bitalloc {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double distance2(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

void append_distinct(std::vector<DistortionVector>& distinct, const DistortionVector& candidate,
                     double tolerance) {
  for (const DistortionVector& seen : distinct) {
    if (distance2(seen.values, candidate.values) <= tolerance * tolerance) return;
  }
  distinct.push_back(candidate);
}

}  // namespace

WeightVector::WeightVector(std::vector<double> raw) : values_(std::move(raw)) {
  if (values_.empty()) throw Error(ErrorCode::empty_input, "weight vector is empty");
  double total = 0.0;
  for (size_t i = 0; i < values_.size(); ++i) {
    double w = values_[i];
    if (!std::isfinite(w) || w < 0.0) {
      std::ostringstream msg;
      msg << "weight " << i << " = " << w << " must be finite and nonnegative";
      throw Error(ErrorCode::invalid_argument, msg.str());
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "at least one weight must be positive");
  }
  for (double& w : values_) w /= total;
}

std::vector<WeightVector> weight_lattice(int dimension, int resolution) {
  if (dimension < 1) throw Error(ErrorCode::invalid_argument, "weight dimension must be positive");
  if (resolution < 1) {
    throw Error(ErrorCode::invalid_argument, "weight lattice resolution must be positive");
  }
  // C(resolution + dimension - 1, dimension - 1) lattice points.
  double estimate = 1.0;
  for (int i = 1; i < dimension; ++i) {
    estimate *= static_cast<double>(resolution + i) / static_cast<double>(i);
    if (estimate > 1e8) break;
  }
  if (estimate > 5e6) {
    std::ostringstream msg;
    msg << "weight lattice of about " << estimate << " points is too large";
    throw GridTooLarge(estimate, msg.str());
  }

  std::vector<WeightVector> lattice;
  lattice.reserve(static_cast<size_t>(estimate));
  std::vector<double> weights(dimension, 0.0);
  auto emit = [&](auto&& self, int index, int remaining) -> void {
    if (index == dimension - 1) {
      weights[index] = static_cast<double>(remaining) / resolution;
      lattice.push_back(WeightVector(weights));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      weights[index] = static_cast<double>(k) / resolution;
      self(self, index + 1, remaining - k);
    }
  };
  emit(emit, 0, resolution);
  return lattice;
}

ScalarizationResult scalarize_discrete(const WeightVector& weight, const PointCloud& cloud,
                                       double tie_tolerance) {
  if (cloud.points.empty()) throw Error(ErrorCode::empty_input, "cannot scalarize an empty cloud");
  for (const CloudPoint& p : cloud.points) {
    if (p.distortion.values.size() != weight.dimension()) {
      throw Error(ErrorCode::dimension_mismatch, "weight and distortion dimensions differ");
    }
  }
  double best = dot(weight.values(), cloud.points[0].distortion.values);
  for (size_t i = 1; i < cloud.points.size(); ++i) {
    best = std::min(best, dot(weight.values(), cloud.points[i].distortion.values));
  }
  ScalarizationResult result{weight, best, {}, {}};
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    if (dot(weight.values(), cloud.points[i].distortion.values) <= best + tie_tolerance) {
      result.minimizer_indices.push_back(i);
      result.minimizers.push_back(cloud.points[i]);
    }
  }
  return result;
}

std::vector<double> project_to_budget(std::vector<double> x, double budget) {
  double clamped_total = 0.0;
  for (double& v : x) {
    v = std::max(v, 0.0);
    clamped_total += v;
  }
  if (clamped_total <= budget) return x;

  // The budget face is active: project onto {v >= 0, sum v = budget} by the
  // usual sorted-threshold rule.
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double threshold = 0.0;
  for (size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    double candidate = (prefix - budget) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
      threshold = candidate;
      break;
    }
  }
  for (double& v : x) v = std::max(v - threshold, 0.0);
  return x;
}

ScalarizationResult scalarize_continuous(const WeightVector& weight, const DistortionModel& model,
                                         const LayerDag& dag, double budget,
                                         const ContinuousOptions& options) {
  const auto* exp_model = dynamic_cast<const LayeredExponentialModel*>(&model);
  if (exp_model == nullptr) {
    throw NotConvexModel("continuous scalarization needs a layered exponential model");
  }
  int n = exp_model->resolution_count();
  if (static_cast<int>(weight.dimension()) != n) {
    throw Error(ErrorCode::dimension_mismatch, "weight and model dimensions differ");
  }
  if (dag.node_count() != n) {
    throw Error(ErrorCode::dimension_mismatch, "model and dependency graph disagree on size");
  }
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorCode::invalid_argument, "budget must be positive");
  }

  const std::vector<double>& w = weight.values();
  auto distortions = [&](const std::vector<double>& bits) {
    return exp_model->evaluate(BitAllocation{bits, budget}).values;
  };
  auto gradient = [&](const std::vector<double>& d) {
    std::vector<double> g(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (const auto& [node, gain] : exp_model->gains(i)) g[node] -= w[i] * d[i] * gain;
    }
    return g;
  };

  std::vector<double> x(n, budget / n);
  std::vector<double> d = distortions(x);
  double fx = dot(w, d);
  double residual = 0.0;
  for (long long iter = 0; iter < options.max_iterations; ++iter) {
    std::vector<double> g = gradient(d);

    std::vector<double> unit_step(n);
    for (int j = 0; j < n; ++j) unit_step[j] = x[j] - g[j];
    residual = std::sqrt(distance2(x, project_to_budget(unit_step, budget)));
    if (residual <= options.tolerance) {
      return ScalarizationResult{weight, fx, {}, {CloudPoint{{x, budget}, {d}}}};
    }

    double step = 1.0;
    while (true) {
      std::vector<double> trial(n);
      for (int j = 0; j < n; ++j) trial[j] = x[j] - step * g[j];
      trial = project_to_budget(std::move(trial), budget);
      std::vector<double> trial_d = distortions(trial);
      double ft = dot(w, trial_d);
      double gap = dot(g, trial) - dot(g, x);
      double quad = distance2(trial, x) / (2.0 * step);
      if (ft <= fx + gap + quad || step < 1e-18) {
        x = std::move(trial);
        d = std::move(trial_d);
        fx = ft;
        break;
      }
      step *= 0.5;
    }
  }
  std::ostringstream msg;
  msg << "projected gradient descent stalled at residual " << residual << " after "
      << options.max_iterations << " iterations";
  throw NoConvergence(residual, msg.str());
}

S0Set sweep_S0(const PointCloud& cloud, int weight_resolution, double tie_tolerance,
               double distinct_tolerance) {
  if (cloud.points.empty()) throw Error(ErrorCode::empty_input, "cannot sweep an empty cloud");
  int dimension = static_cast<int>(cloud.points[0].distortion.values.size());
  S0Set set;
  set.weight_resolution = weight_resolution;
  for (WeightVector& weight : weight_lattice(dimension, weight_resolution)) {
    ScalarizationResult result = scalarize_discrete(weight, cloud, tie_tolerance);
    for (const CloudPoint& minimizer : result.minimizers) {
      append_distinct(set.distinct_distortions, minimizer.distortion, distinct_tolerance);
    }
    set.entries.push_back(std::move(result));
  }
  return set;
}

S0Set sweep_S0_continuous(const DistortionModel& model, const LayerDag& dag, double budget,
                          int weight_resolution, const ContinuousOptions& options,
                          double distinct_tolerance) {
  S0Set set;
  set.weight_resolution = weight_resolution;
  for (WeightVector& weight : weight_lattice(model.resolution_count(), weight_resolution)) {
    ScalarizationResult result = scalarize_continuous(weight, model, dag, budget, options);
    for (const CloudPoint& minimizer : result.minimizers) {
      append_distinct(set.distinct_distortions, minimizer.distortion, distinct_tolerance);
    }
    set.entries.push_back(std::move(result));
  }
  return set;
}

}  // namespace bitalloc
