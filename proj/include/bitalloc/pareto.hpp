#pragma once

#include <cstddef>
#include <vector>

#include "bitalloc/distortion.hpp"

namespace bitalloc {

// Componentwise relations between distortion vectors. With slack eps,
// "a below b" reads a_i <= b_i + eps, and a coordinate counts as strict only
// when a_i < b_i - eps, so the relations stay mutually exclusive.
enum class Order {
  equal,         // every coordinate within eps
  leq,           // below in every coordinate (never strongest; see compare)
  lt,            // below everywhere, strictly below somewhere
  ll,            // strictly below in every coordinate
  geq,           // mirror of leq
  gt,            // mirror of lt
  gg,            // mirror of ll
  incomparable,  // strictly below somewhere and strictly above somewhere
};

const char* order_name(Order order);

// Strongest relation from a to b. "leq but not lt" collapses to equal (a
// coordinate neither strict nor out of slack is within slack), so leq/geq
// never come back from here; they exist for symmetry of the predicate set.
Order compare(const DistortionVector& a, const DistortionVector& b, double eps = 0.0);

bool is_leq(Order order);
bool is_lt(Order order);
bool is_ll(Order order);
bool is_geq(Order order);
bool is_gt(Order order);
bool is_gg(Order order);

struct CloudPoint {
  BitAllocation allocation;
  DistortionVector distortion;
};

// Image of a feasible allocation set under a distortion model, with the grid
// parameters it was generated from (grid_step 0 for hand-built clouds).
struct PointCloud {
  std::vector<CloudPoint> points;
  double budget = 0.0;
  double grid_step = 0.0;
};

enum class PointLabel {
  pareto,     // nothing lt-dominates it
  weak_only,  // lt-dominated, but nothing ll-dominates it
  dominated,  // ll-dominated
};

const char* point_label_name(PointLabel label);

struct LabeledPoint {
  CloudPoint point;
  PointLabel label = PointLabel::pareto;
};

// Every cloud point with its dominance label, in cloud order. The weak front
// is the pareto plus weak_only subset.
struct ParetoFront {
  std::vector<LabeledPoint> points;
  double budget = 0.0;
  double grid_step = 0.0;

  std::vector<size_t> weak_indices() const;
  size_t pareto_count() const;
  size_t weak_count() const;
};

// Dominance labels for a bag of distortion vectors. Equal points never
// dominate each other, so exact duplicates can both be labeled pareto.
std::vector<PointLabel> label_distortions(const std::vector<DistortionVector>& points,
                                          double eps = 0.0);

ParetoFront filter_front(const PointCloud& cloud, double eps = 0.0);

inline constexpr double kDefaultGridCap = 1e7;

// All allocations whose entries are nonnegative integer multiples of
// grid_step with total at most budget, in lexicographic order, mapped through
// the model. Throws GridTooLarge before enumerating if the simplex grid holds
// more than `cap` points.
PointCloud enumerate_grid(const DistortionModel& model, const LayerDag& dag, double budget,
                          double grid_step, double cap = kDefaultGridCap);

}  // namespace bitalloc
