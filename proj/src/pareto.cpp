#include "bitalloc/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bitalloc {

const char* order_name(Order order) {
  switch (order) {
    case Order::equal: return "equal";
    case Order::leq: return "leq";
    case Order::lt: return "lt";
    case Order::ll: return "ll";
    case Order::geq: return "geq";
    case Order::gt: return "gt";
    case Order::gg: return "gg";
    case Order::incomparable: break;
  }
  return "incomparable";
}

const char* point_label_name(PointLabel label) {
  switch (label) {
    case PointLabel::pareto: return "pareto";
    case PointLabel::weak_only: return "weak_only";
    case PointLabel::dominated: break;
  }
  return "dominated";
}

Order compare(const DistortionVector& a, const DistortionVector& b, double eps) {
  size_t n = a.values.size();
  if (b.values.size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "distortion vectors of different dimension");
  }
  if (n == 0) throw Error(ErrorCode::empty_input, "cannot compare empty distortion vectors");
  size_t below = 0, strictly_below = 0, above = 0, strictly_above = 0;
  for (size_t i = 0; i < n; ++i) {
    if (a.values[i] <= b.values[i] + eps) ++below;
    if (a.values[i] < b.values[i] - eps) ++strictly_below;
    if (b.values[i] <= a.values[i] + eps) ++above;
    if (b.values[i] < a.values[i] - eps) ++strictly_above;
  }
  if (below == n && above == n) return Order::equal;
  if (strictly_below == n) return Order::ll;
  if (below == n && strictly_below > 0) return Order::lt;
  if (below == n) return Order::leq;
  if (strictly_above == n) return Order::gg;
  if (above == n && strictly_above > 0) return Order::gt;
  if (above == n) return Order::geq;
  return Order::incomparable;
}

bool is_leq(Order order) {
  return order == Order::equal || order == Order::leq || order == Order::lt || order == Order::ll;
}
bool is_lt(Order order) { return order == Order::lt || order == Order::ll; }
bool is_ll(Order order) { return order == Order::ll; }
bool is_geq(Order order) {
  return order == Order::equal || order == Order::geq || order == Order::gt || order == Order::gg;
}
bool is_gt(Order order) { return order == Order::gt || order == Order::gg; }
bool is_gg(Order order) { return order == Order::gg; }

std::vector<size_t> ParetoFront::weak_indices() const {
  std::vector<size_t> indices;
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].label != PointLabel::dominated) indices.push_back(i);
  }
  return indices;
}

size_t ParetoFront::pareto_count() const {
  size_t count = 0;
  for (const LabeledPoint& p : points) count += p.label == PointLabel::pareto;
  return count;
}

size_t ParetoFront::weak_count() const {
  size_t count = 0;
  for (const LabeledPoint& p : points) count += p.label != PointLabel::dominated;
  return count;
}

std::vector<PointLabel> label_distortions(const std::vector<DistortionVector>& points,
                                          double eps) {
  size_t n = points.size();
  std::vector<PointLabel> labels(n, PointLabel::pareto);
  if (n == 0) return labels;
  size_t dim = points[0].values.size();
  for (const DistortionVector& p : points) {
    if (p.values.size() != dim) {
      throw Error(ErrorCode::dimension_mismatch, "cloud mixes distortion dimensions");
    }
  }

  // Sort by first coordinate: only a prefix can sit below a given point
  // there, which bounds every domination scan.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return points[a].values < points[b].values;
  });

  for (size_t pos = 0; pos < n; ++pos) {
    size_t target = order[pos];
    bool any_lt = false;
    bool any_ll = false;
    for (size_t cpos = 0; cpos < n && !any_ll; ++cpos) {
      size_t candidate = order[cpos];
      if (candidate == target) continue;
      if (points[candidate].values[0] > points[target].values[0] + eps) break;
      Order rel = compare(points[candidate], points[target], eps);
      any_lt |= is_lt(rel);
      any_ll |= is_ll(rel);
    }
    if (any_ll) {
      labels[target] = PointLabel::dominated;
    } else if (any_lt) {
      labels[target] = PointLabel::weak_only;
    }
  }
  return labels;
}

ParetoFront filter_front(const PointCloud& cloud, double eps) {
  if (cloud.points.empty()) {
    throw Error(ErrorCode::empty_input, "cannot filter an empty cloud");
  }
  std::vector<DistortionVector> distortions;
  distortions.reserve(cloud.points.size());
  for (const CloudPoint& p : cloud.points) distortions.push_back(p.distortion);
  std::vector<PointLabel> labels = label_distortions(distortions, eps);
  ParetoFront front;
  front.budget = cloud.budget;
  front.grid_step = cloud.grid_step;
  front.points.reserve(cloud.points.size());
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    front.points.push_back({cloud.points[i], labels[i]});
  }
  return front;
}

PointCloud enumerate_grid(const DistortionModel& model, const LayerDag& dag, double budget,
                          double grid_step, double cap) {
  if (model.resolution_count() != dag.node_count()) {
    throw Error(ErrorCode::dimension_mismatch, "model and dependency graph disagree on size");
  }
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorCode::invalid_argument, "budget must be positive");
  }
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw Error(ErrorCode::invalid_argument, "grid step must be positive");
  }
  int n = model.resolution_count();
  long long max_steps = static_cast<long long>(std::floor(budget / grid_step + 1e-9));

  // Grid size is C(max_steps + n, n); bail out before enumerating if too big.
  double estimate = 1.0;
  for (int i = 1; i <= n; ++i) {
    estimate *= static_cast<double>(max_steps + i) / static_cast<double>(i);
    if (estimate > 64 * cap) break;
  }
  if (estimate > cap) {
    std::ostringstream msg;
    msg << "grid of about " << estimate << " points exceeds the cap of " << cap;
    throw GridTooLarge(estimate, msg.str());
  }

  PointCloud cloud;
  cloud.budget = budget;
  cloud.grid_step = grid_step;
  cloud.points.reserve(static_cast<size_t>(estimate));

  std::vector<long long> steps(n, 0);
  std::vector<double> bits(n, 0.0);
  // Lexicographic odometer over step counts with total at most max_steps.
  auto emit = [&](auto&& self, int index, long long remaining) -> void {
    if (index == n) {
      BitAllocation alloc{bits, budget};
      DistortionVector d = model.evaluate(alloc);
      cloud.points.push_back({std::move(alloc), std::move(d)});
      return;
    }
    for (long long k = 0; k <= remaining; ++k) {
      steps[index] = k;
      bits[index] = static_cast<double>(k) * grid_step;
      self(self, index + 1, remaining - k);
    }
  };
  emit(emit, 0, max_steps);
  return cloud;
}

}  // namespace bitalloc
