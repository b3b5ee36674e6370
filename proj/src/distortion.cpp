#include "bitalloc/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bitalloc {

namespace {

constexpr double kFeasibilitySlack = 1e-9;
constexpr long long kBitQuantum = 1000000000;  // lookup keys quantize bits to 1e-9

void check_feasible(const BitAllocation& alloc) {
  double total = 0.0;
  for (size_t i = 0; i < alloc.bits.size(); ++i) {
    double b = alloc.bits[i];
    if (!std::isfinite(b) || b < -kFeasibilitySlack) {
      std::ostringstream msg;
      msg << "allocation bit " << i << " = " << b << " is negative";
      throw InfeasibleAllocation(msg.str());
    }
    total += b;
  }
  double slack = kFeasibilitySlack * std::max(1.0, std::abs(alloc.budget));
  if (!std::isfinite(alloc.budget) || total > alloc.budget + slack) {
    std::ostringstream msg;
    msg << "allocation total " << total << " exceeds budget " << alloc.budget;
    throw InfeasibleAllocation(msg.str());
  }
}

void check_dimension(const DistortionModel& model, const BitAllocation& alloc) {
  if (static_cast<int>(alloc.bits.size()) != model.resolution_count()) {
    std::ostringstream msg;
    msg << "allocation has " << alloc.bits.size() << " entries, model expects "
        << model.resolution_count();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
}

std::vector<long long> quantize_bits(const std::vector<double>& bits) {
  std::vector<long long> key(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) key[i] = std::llround(bits[i] * kBitQuantum);
  return key;
}

}  // namespace

LayeredExponentialModel::LayeredExponentialModel(const LayerDag& dag, std::vector<double> bases,
                                                 const std::vector<std::map<int, double>>& gains)
    : bases_(std::move(bases)) {
  int n = dag.node_count();
  if (static_cast<int>(bases_.size()) != n || static_cast<int>(gains.size()) != n) {
    throw Error(ErrorCode::dimension_mismatch,
                "model needs one base and one gain map per resolution");
  }
  gains_.resize(n);
  max_gains_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(bases_[i] > 0.0) || !std::isfinite(bases_[i])) {
      throw SchemaError("base distortion of resolution " + std::to_string(i) +
                        " must be positive");
    }
    const std::vector<int>& members = dag.subgraph(i).members;
    for (const auto& [node, gain] : gains[i]) {
      if (!std::binary_search(members.begin(), members.end(), node)) {
        std::ostringstream msg;
        msg << "gain for resolution " << i << " names node " << node
            << ", which is outside its dependency subgraph";
        throw SchemaError(msg.str());
      }
      if (!(gain >= 0.0) || !std::isfinite(gain)) {
        std::ostringstream msg;
        msg << "gain of resolution " << i << ", node " << node << " must be nonnegative";
        throw SchemaError(msg.str());
      }
    }
    double max_gain = 0.0;
    for (int node : members) {
      auto it = gains[i].find(node);
      double gain = it == gains[i].end() ? 1.0 : it->second;
      gains_[i].emplace_back(node, gain);
      max_gain = std::max(max_gain, gain);
    }
    if (!(max_gain > 0.0)) {
      throw SchemaError("all gains of resolution " + std::to_string(i) +
                        " are zero; the model would be rate-independent");
    }
    max_gains_[i] = max_gain;
  }
}

DistortionVector LayeredExponentialModel::evaluate(const BitAllocation& alloc) const {
  check_dimension(*this, alloc);
  check_feasible(alloc);
  DistortionVector d;
  d.values.resize(bases_.size());
  for (size_t i = 0; i < bases_.size(); ++i) {
    double exponent = 0.0;
    for (const auto& [node, gain] : gains_[i]) exponent += gain * alloc.bits[node];
    d.values[i] = bases_[i] * std::exp(-exponent);
  }
  return d;
}

double LayeredExponentialModel::base(int resolution) const {
  if (resolution < 0 || resolution >= resolution_count()) {
    throw IndexError("resolution " + std::to_string(resolution) + " out of range");
  }
  return bases_[resolution];
}

std::span<const std::pair<int, double>> LayeredExponentialModel::gains(int resolution) const {
  if (resolution < 0 || resolution >= resolution_count()) {
    throw IndexError("resolution " + std::to_string(resolution) + " out of range");
  }
  return gains_[resolution];
}

double LayeredExponentialModel::max_gain(int resolution) const {
  if (resolution < 0 || resolution >= resolution_count()) {
    throw IndexError("resolution " + std::to_string(resolution) + " out of range");
  }
  return max_gains_[resolution];
}

TabulatedModel::TabulatedModel(std::vector<Row> rows, double grid_step)
    : rows_(std::move(rows)), grid_step_(grid_step) {
  if (rows_.empty()) throw Error(ErrorCode::empty_input, "tabulated model has no rows");
  if (!(grid_step_ > 0.0) || !std::isfinite(grid_step_)) {
    throw SchemaError("tabulated model grid step must be positive");
  }
  size_t n = rows_.front().bits.size();
  if (n == 0 || rows_.front().distortions.size() != n) {
    throw SchemaError("tabulated rows need matching allocation and distortion widths");
  }
  resolution_count_ = static_cast<int>(n);
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Row& row = rows_[r];
    if (row.bits.size() != n || row.distortions.size() != n) {
      throw SchemaError("tabulated row " + std::to_string(r) + " has inconsistent width");
    }
    for (double b : row.bits) {
      if (!std::isfinite(b) || b < 0.0) {
        throw SchemaError("tabulated row " + std::to_string(r) + " has a negative allocation");
      }
    }
    for (double d : row.distortions) {
      if (!std::isfinite(d) || d < 0.0) {
        throw SchemaError("tabulated row " + std::to_string(r) + " has an invalid distortion");
      }
    }
    auto [it, inserted] = index_.emplace(quantize_bits(row.bits), r);
    if (!inserted) {
      throw SchemaError("tabulated row " + std::to_string(r) + " duplicates row " +
                        std::to_string(it->second));
    }
  }
}

DistortionVector TabulatedModel::evaluate(const BitAllocation& alloc) const {
  check_dimension(*this, alloc);
  check_feasible(alloc);
  auto it = index_.find(quantize_bits(alloc.bits));
  if (it == index_.end()) {
    std::ostringstream msg;
    msg << "allocation (";
    for (size_t i = 0; i < alloc.bits.size(); ++i) msg << (i ? ", " : "") << alloc.bits[i];
    msg << ") is not a tabulated grid point";
    throw OffGrid(msg.str());
  }
  return DistortionVector{rows_[it->second].distortions};
}

DistortionVector distortion_vector(const DistortionModel& model, const BitAllocation& alloc) {
  return model.evaluate(alloc);
}

double RdEnvelope::evaluate(double rate) const {
  double slack = 1e-12 * std::max(1.0, budget_);
  if (!(rate >= -slack) || rate > budget_ + slack) {
    std::ostringstream msg;
    msg << "rate " << rate << " outside [0, " << budget_ << "]";
    throw OutOfRange(msg.str());
  }
  if (analytic_) return base_ * std::exp(-gamma_max_ * std::max(0.0, rate));
  long long bucket = std::llround(rate / bucket_step_);
  auto it = buckets_.find(bucket);
  if (it == buckets_.end()) {
    std::ostringstream msg;
    msg << "no tabulated allocation gives resolution " << resolution_ << " a subtree rate near "
        << rate;
    throw EmptySlice(msg.str());
  }
  return it->second;
}

RdEnvelope rd_envelope(const DistortionModel& model, const LayerDag& dag, int resolution,
                       double budget, double sample_step) {
  if (resolution < 0 || resolution >= model.resolution_count()) {
    throw IndexError("resolution " + std::to_string(resolution) + " out of range");
  }
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorCode::invalid_argument, "budget must be positive");
  }
  RdEnvelope env;
  env.resolution_ = resolution;
  env.budget_ = budget;
  if (const auto* exp_model = dynamic_cast<const LayeredExponentialModel*>(&model)) {
    env.analytic_ = true;
    env.base_ = exp_model->base(resolution);
    env.gamma_max_ = exp_model->max_gain(resolution);
    double step = sample_step > 0.0 ? sample_step : budget / 100.0;
    if (budget / step > 1e7) {
      throw Error(ErrorCode::invalid_argument, "envelope sample step too small for budget");
    }
    for (long long k = 0;; ++k) {
      double rate = static_cast<double>(k) * step;
      if (rate > budget + 1e-12 * budget) break;
      rate = std::min(rate, budget);
      env.samples_.push_back({rate, env.base_ * std::exp(-env.gamma_max_ * rate)});
    }
    if (env.samples_.back().rate < budget - 1e-12 * budget) {
      env.samples_.push_back({budget, env.base_ * std::exp(-env.gamma_max_ * budget)});
    }
    return env;
  }
  const auto& tab = dynamic_cast<const TabulatedModel&>(model);
  env.bucket_step_ = tab.grid_step();
  const std::vector<int>& members = dag.subgraph(resolution).members;
  for (const TabulatedModel::Row& row : tab.rows()) {
    double rate = 0.0;
    for (int node : members) rate += row.bits[node];
    long long bucket = std::llround(rate / env.bucket_step_);
    double d = row.distortions[resolution];
    auto [it, inserted] = env.buckets_.emplace(bucket, d);
    if (!inserted) it->second = std::min(it->second, d);
  }
  for (const auto& [bucket, d] : env.buckets_) {
    env.samples_.push_back({static_cast<double>(bucket) * env.bucket_step_, d});
  }
  return env;
}

double inverse_rate(const RdEnvelope& envelope, double distortion, double tol) {
  const auto& samples = envelope.samples();
  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    if (samples[k + 1].distortion >= samples[k].distortion) {
      std::ostringstream msg;
      msg << "envelope of resolution " << envelope.resolution()
          << " is not strictly decreasing between rates " << samples[k].rate << " and "
          << samples[k + 1].rate;
      throw NotMonotone(msg.str());
    }
  }
  double at_zero = envelope.evaluate(0.0);
  double at_budget = envelope.evaluate(envelope.budget());
  if (distortion == at_zero) return 0.0;
  if (distortion == at_budget) return envelope.budget();
  if (distortion > at_zero || distortion < at_budget) {
    std::ostringstream msg;
    msg << "distortion " << distortion << " outside envelope range [" << at_budget << ", "
        << at_zero << "]";
    throw OutOfRange(msg.str());
  }
  double lo = 0.0;
  double hi = envelope.budget();
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    double value = envelope.evaluate(mid);
    if (std::abs(value - distortion) <= tol) return mid;
    if (value > distortion) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace bitalloc
