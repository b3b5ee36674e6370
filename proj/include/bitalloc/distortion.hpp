#pragma once

#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "bitalloc/graph.hpp"

namespace bitalloc {

// Bits granted to each node. Feasible when every entry is nonnegative and the
// total stays within `budget` (small float slack allowed).
struct BitAllocation {
  std::vector<double> bits;
  double budget = 0.0;
};

// One distortion value per resolution; finite and nonnegative by construction.
struct DistortionVector {
  std::vector<double> values;
};

enum class ModelKind { layered_exponential, tabulated };

class DistortionModel {
 public:
  virtual ~DistortionModel() = default;

  virtual ModelKind kind() const = 0;
  virtual int resolution_count() const = 0;

  // Maps an allocation to its distortion vector. Throws on dimension mismatch
  // or infeasible allocations; TabulatedModel additionally throws OffGrid for
  // allocations it has no row for.
  virtual DistortionVector evaluate(const BitAllocation& alloc) const = 0;
};

// g_i(b) = c_i * exp(-sum of gamma_ij * b_j over the members of resolution
// i's dependency subgraph). Gains default to 1 for members left unlisted;
// listing a gain for a node outside the subgraph is a schema error.
class LayeredExponentialModel : public DistortionModel {
 public:
  // `bases` holds c_i > 0 per resolution; `gains[i]` maps member node -> gain
  // (nonnegative, and not all zero once defaults are applied).
  LayeredExponentialModel(const LayerDag& dag, std::vector<double> bases,
                          const std::vector<std::map<int, double>>& gains);

  ModelKind kind() const override { return ModelKind::layered_exponential; }
  int resolution_count() const override { return static_cast<int>(bases_.size()); }
  DistortionVector evaluate(const BitAllocation& alloc) const override;

  double base(int resolution) const;
  // Fully resolved (node, gain) terms of resolution i's exponent, ascending by node.
  std::span<const std::pair<int, double>> gains(int resolution) const;
  double max_gain(int resolution) const;

 private:
  std::vector<double> bases_;
  std::vector<std::vector<std::pair<int, double>>> gains_;
  std::vector<double> max_gains_;
};

// Distortions known only at explicit allocation grid points. Lookup keys
// quantize each coordinate to 1e-9 bits, so evaluation accepts allocations
// equal to a tabulated row up to that granularity and throws OffGrid
// otherwise.
class TabulatedModel : public DistortionModel {
 public:
  struct Row {
    std::vector<double> bits;
    std::vector<double> distortions;
  };

  TabulatedModel(std::vector<Row> rows, double grid_step);

  ModelKind kind() const override { return ModelKind::tabulated; }
  int resolution_count() const override { return resolution_count_; }
  DistortionVector evaluate(const BitAllocation& alloc) const override;

  const std::vector<Row>& rows() const { return rows_; }
  double grid_step() const { return grid_step_; }

 private:
  std::vector<Row> rows_;
  double grid_step_ = 0.0;
  int resolution_count_ = 0;
  std::map<std::vector<long long>, size_t> index_;
};

DistortionVector distortion_vector(const DistortionModel& model, const BitAllocation& alloc);

// Rate-distortion envelope of one resolution: the least distortion reachable
// when its dependency subgraph receives a given total rate. Closed form for
// the layered exponential model (c * exp(-gamma_max * r)); a per-rate-bucket
// minimum for tabulated models.
class RdEnvelope {
 public:
  struct Sample {
    double rate = 0.0;
    double distortion = 0.0;
  };

  double evaluate(double rate) const;

  int resolution() const { return resolution_; }
  double budget() const { return budget_; }
  bool analytic() const { return analytic_; }
  const std::vector<Sample>& samples() const { return samples_; }

 private:
  friend RdEnvelope rd_envelope(const DistortionModel& model, const LayerDag& dag, int resolution,
                                double budget, double sample_step);

  int resolution_ = 0;
  double budget_ = 0.0;
  bool analytic_ = false;
  double base_ = 0.0;
  double gamma_max_ = 0.0;
  double bucket_step_ = 0.0;
  std::map<long long, double> buckets_;
  std::vector<Sample> samples_;
};

// sample_step controls the tabulation of an analytic envelope (0 picks
// budget/100); bucketed envelopes always sample at the model's own grid.
RdEnvelope rd_envelope(const DistortionModel& model, const LayerDag& dag, int resolution,
                       double budget, double sample_step = 0.0);

// Inverse of a strictly decreasing envelope: the rate whose distortion equals
// `distortion`. Exact at both endpoints; bisection to |D(r) - d| <= tol (at
// most 200 iterations) inside the interval.
double inverse_rate(const RdEnvelope& envelope, double distortion, double tol = 1e-9);

}  // namespace bitalloc
