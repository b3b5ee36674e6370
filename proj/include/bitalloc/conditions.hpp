#pragma once

#include <span>
#include <string>
#include <vector>

#include "bitalloc/pareto.hpp"
#include "bitalloc/scalarize.hpp"

namespace bitalloc {

// One concrete violation: the offending coordinates (meaning depends on
// `kind`), the violation size, and a printable explanation.
struct WitnessRecord {
  std::string kind;
  std::string detail;
  std::vector<std::vector<double>> points;
  double magnitude = 0.0;
};

struct ConditionReport {
  std::string check_name;
  bool passed = false;
  double tolerance = 0.0;
  std::vector<WitnessRecord> witnesses;
  std::string summary;
};

// Envelope sanity: samples must strictly decrease and have nonnegative second
// differences (within tol). Needs at least three samples.
ConditionReport check_envelope(std::span<const RdEnvelope::Sample> samples, double tol = 1e-9);
ConditionReport check_envelope(const RdEnvelope& envelope, double tol = 1e-9);

// Every weak-front point must have another weak-front point within max_gap
// (Euclidean). Vacuously true for a single-point front.
ConditionReport check_front_continuity(const ParetoFront& front, double max_gap);

// Curve-front ordering: walking the weak front in lexicographic distortion
// order, every intermediate point must stay inside the coordinate box of each
// enclosing pair. Holds for two-resolution fronts (monotone staircases); not
// a theorem for surface fronts, so the check trusts whatever front it is
// given and reports violating triples.
ConditionReport check_bounding_box(const ParetoFront& front, double slack = 1e-9);

// Support slack below which a weak point counts as touched by some weighted
// minimum. Fixed rather than configurable: it only absorbs float noise.
inline constexpr double kSupportTolerance = 1e-6;

// Convexity of the attainable region plus its upper set, tested through
// supporting weights: every weak point p must admit weights w with
// w . p <= min over the cloud of w . x (up to support_tol). Searches a
// simplex lattice first, then refines locally.
ConditionReport check_minkowski_convexity(const std::vector<DistortionVector>& cloud,
                                          double support_tol = kSupportTolerance);
ConditionReport check_minkowski_convexity(const PointCloud& cloud,
                                          double support_tol = kSupportTolerance);

// Label consistency, both directions: every point must be equaled-or-
// dominated by some weak-labeled point, and no weak-labeled point may be
// strictly dominated. A front straight out of filter_front always passes;
// corrupted labels fail with witnesses. `budget` must match the front's
// provenance.
ConditionReport check_lemma1(const ParetoFront& front, double budget, double tol = 0.0);

struct CoverageReport {
  size_t weak_pareto_count = 0;
  size_t covered_count = 0;
  std::vector<DistortionVector> missed;
  double match_tolerance = 0.0;
};

// Matches each weak-front point against the scalarization sweep's distinct
// minimizers by Euclidean distance.
CoverageReport compare_S0_vs_weak_pareto(const S0Set& s0, const ParetoFront& front,
                                         double match_tolerance);

}  // namespace bitalloc
