#include "bitalloc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace bitalloc {

namespace {

std::string format_point(const std::vector<double>& values) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << values[i];
  out << ")";
  return out.str();
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

// Weak-front distortions in front order, with the originating front index.
std::vector<std::pair<size_t, std::vector<double>>> weak_distortions(const ParetoFront& front) {
  std::vector<std::pair<size_t, std::vector<double>>> weak;
  for (size_t i = 0; i < front.points.size(); ++i) {
    if (front.points[i].label != PointLabel::dominated) {
      weak.emplace_back(i, front.points[i].point.distortion.values);
    }
  }
  return weak;
}

}  // namespace

ConditionReport check_envelope(std::span<const RdEnvelope::Sample> samples, double tol) {
  if (samples.size() < 3) {
    throw TooFewSamples("envelope check needs at least 3 samples, got " +
                        std::to_string(samples.size()));
  }
  std::vector<RdEnvelope::Sample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const RdEnvelope::Sample& a, const RdEnvelope::Sample& b) { return a.rate < b.rate; });

  ConditionReport report;
  report.check_name = "envelope";
  report.tolerance = tol;
  for (size_t k = 0; k + 1 < sorted.size(); ++k) {
    double diff = sorted[k + 1].distortion - sorted[k].distortion;
    if (diff > -tol) {
      WitnessRecord w;
      w.kind = "strict_decrease";
      w.points = {{sorted[k].rate, sorted[k].distortion},
                  {sorted[k + 1].rate, sorted[k + 1].distortion}};
      w.magnitude = diff;
      std::ostringstream detail;
      detail << "distortion does not strictly decrease between rates " << sorted[k].rate << " and "
             << sorted[k + 1].rate << " (difference " << diff << ")";
      w.detail = detail.str();
      report.witnesses.push_back(std::move(w));
    }
  }
  for (size_t k = 0; k + 2 < sorted.size(); ++k) {
    double second = sorted[k + 2].distortion - 2.0 * sorted[k + 1].distortion +
                    sorted[k].distortion;
    if (second < -tol) {
      WitnessRecord w;
      w.kind = "convexity";
      w.points = {{sorted[k].rate, sorted[k].distortion},
                  {sorted[k + 1].rate, sorted[k + 1].distortion},
                  {sorted[k + 2].rate, sorted[k + 2].distortion}};
      w.magnitude = second;
      std::ostringstream detail;
      detail << "negative second difference " << second << " across rates " << sorted[k].rate
             << ", " << sorted[k + 1].rate << ", " << sorted[k + 2].rate;
      w.detail = detail.str();
      report.witnesses.push_back(std::move(w));
    }
  }
  report.passed = report.witnesses.empty();
  std::ostringstream summary;
  if (report.passed) {
    summary << "strictly decreasing and convex across " << sorted.size() << " samples";
  } else {
    summary << report.witnesses.size() << " envelope violation(s) across " << sorted.size()
            << " samples";
  }
  report.summary = summary.str();
  return report;
}

ConditionReport check_envelope(const RdEnvelope& envelope, double tol) {
  ConditionReport report = check_envelope(std::span(envelope.samples()), tol);
  report.check_name = "envelope[" + std::to_string(envelope.resolution()) + "]";
  return report;
}

ConditionReport check_front_continuity(const ParetoFront& front, double max_gap) {
  if (front.points.empty()) throw EmptyFront("continuity check on an empty front");
  auto weak = weak_distortions(front);
  ConditionReport report;
  report.check_name = "front_continuity";
  report.tolerance = max_gap;
  if (weak.size() <= 1) {
    report.passed = true;
    report.summary = "vacuous: fewer than two weak points";
    return report;
  }
  for (size_t i = 0; i < weak.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    size_t nearest_index = i;
    for (size_t j = 0; j < weak.size(); ++j) {
      if (j == i) continue;
      double d = euclidean(weak[i].second, weak[j].second);
      if (d < nearest) {
        nearest = d;
        nearest_index = j;
      }
    }
    if (nearest > max_gap) {
      WitnessRecord w;
      w.kind = "gap";
      w.points = {weak[i].second, weak[nearest_index].second};
      w.magnitude = nearest;
      std::ostringstream detail;
      detail << "weak point " << format_point(weak[i].second) << " sits " << nearest
             << " from its nearest weak neighbor (limit " << max_gap << ")";
      w.detail = detail.str();
      report.witnesses.push_back(std::move(w));
    }
  }
  std::stable_sort(report.witnesses.begin(), report.witnesses.end(),
                   [](const WitnessRecord& a, const WitnessRecord& b) {
                     return a.magnitude > b.magnitude;
                   });
  report.passed = report.witnesses.empty();
  std::ostringstream summary;
  if (report.passed) {
    summary << "all " << weak.size() << " weak points within gap " << max_gap;
  } else {
    summary << report.witnesses.size() << " of " << weak.size() << " weak points exceed gap "
            << max_gap;
  }
  report.summary = summary.str();
  return report;
}

ConditionReport check_bounding_box(const ParetoFront& front, double slack) {
  if (front.points.empty()) throw EmptyFront("bounding box check on an empty front");
  auto weak = weak_distortions(front);
  std::stable_sort(weak.begin(), weak.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });

  ConditionReport report;
  report.check_name = "bounding_box";
  report.tolerance = slack;
  size_t n = weak.size();
  if (n < 3) {
    report.passed = true;
    report.summary = "vacuous: fewer than three weak points";
    return report;
  }
  size_t dim = weak[0].second.size();

  // suffix_min/max[d][pos] over the sorted weak list; lets the (a, c) pair
  // scan decide in O(dim) whether any later b completes a violation.
  std::vector<std::vector<double>> suffix_min(dim, std::vector<double>(n + 1));
  std::vector<std::vector<double>> suffix_max(dim, std::vector<double>(n + 1));
  for (size_t d = 0; d < dim; ++d) {
    suffix_min[d][n] = std::numeric_limits<double>::infinity();
    suffix_max[d][n] = -std::numeric_limits<double>::infinity();
    for (size_t pos = n; pos-- > 0;) {
      suffix_min[d][pos] = std::min(suffix_min[d][pos + 1], weak[pos].second[d]);
      suffix_max[d][pos] = std::max(suffix_max[d][pos + 1], weak[pos].second[d]);
    }
  }

  for (size_t ia = 0; ia + 2 < n; ++ia) {
    const std::vector<double>& a = weak[ia].second;
    for (size_t ic = ia + 1; ic + 1 < n; ++ic) {
      const std::vector<double>& c = weak[ic].second;
      for (size_t d = 0; d < dim; ++d) {
        bool low = c[d] < a[d] - slack && c[d] < suffix_max[d][ic + 1] - slack;
        bool high = c[d] > a[d] + slack && c[d] > suffix_min[d][ic + 1] + slack;
        if (!low && !high) continue;
        // Recover the first later point completing the violation.
        size_t ib = ic + 1;
        while (ib < n) {
          double bd = weak[ib].second[d];
          if ((low && c[d] < bd - slack) || (high && c[d] > bd + slack)) break;
          ++ib;
        }
        const std::vector<double>& b = weak[ib].second;
        WitnessRecord w;
        w.kind = "box";
        w.points = {a, c, b};
        w.magnitude = low ? std::min(a[d], b[d]) - c[d] : c[d] - std::max(a[d], b[d]);
        std::ostringstream detail;
        detail << "point " << format_point(c) << " leaves the box of " << format_point(a)
               << " and " << format_point(b) << " in coordinate " << d << " (by " << w.magnitude
               << ")";
        w.detail = detail.str();
        report.witnesses.push_back(std::move(w));
        break;  // one witness per (a, c) pair
      }
    }
  }
  report.passed = report.witnesses.empty();
  std::ostringstream summary;
  if (report.passed) {
    summary << "all intermediate points of " << n << " weak points stay boxed";
  } else {
    summary << report.witnesses.size() << " violating triple(s) among " << n << " weak points";
  }
  report.summary = summary.str();
  return report;
}

namespace {

// Support slack of point p at weights w: w . p minus the scalarized minimum.
// The minimum of a nonnegative weighting is always attained on the weak
// front, so only weak points participate in the inner scan.
double support_slack(const std::vector<double>& w,
                     const std::vector<const std::vector<double>*>& weak_values,
                     const std::vector<double>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const std::vector<double>* x : weak_values) {
    double v = 0.0;
    for (size_t i = 0; i < w.size(); ++i) v += w[i] * (*x)[i];
    best = std::min(best, v);
  }
  double at_p = 0.0;
  for (size_t i = 0; i < w.size(); ++i) at_p += w[i] * p[i];
  return at_p - best;
}

}  // namespace

ConditionReport check_minkowski_convexity(const PointCloud& cloud, double support_tol) {
  std::vector<DistortionVector> distortions;
  distortions.reserve(cloud.points.size());
  for (const CloudPoint& p : cloud.points) distortions.push_back(p.distortion);
  return check_minkowski_convexity(distortions, support_tol);
}

ConditionReport check_minkowski_convexity(const std::vector<DistortionVector>& distortions,
                                          double support_tol) {
  if (distortions.empty()) throw Error(ErrorCode::empty_input, "convexity check on empty cloud");
  std::vector<PointLabel> labels = label_distortions(distortions);

  std::vector<const std::vector<double>*> weak_values;
  for (size_t i = 0; i < distortions.size(); ++i) {
    if (labels[i] != PointLabel::dominated) weak_values.push_back(&distortions[i].values);
  }
  int dim = static_cast<int>(distortions[0].values.size());

  // Largest simplex lattice that stays small, as the global seed.
  int lattice_resolution = 1;
  for (int candidate : {64, 32, 16, 8, 4, 3, 2}) {
    double count = 1.0;
    for (int i = 1; i < dim; ++i) count *= static_cast<double>(candidate + i) / i;
    if (count <= 2e5) {
      lattice_resolution = candidate;
      break;
    }
  }
  std::vector<WeightVector> lattice = weight_lattice(dim, lattice_resolution);

  ConditionReport report;
  report.check_name = "minkowski_convexity";
  report.tolerance = support_tol;

  for (const std::vector<double>* pv : weak_values) {
    const std::vector<double>& p = *pv;
    double best_slack = std::numeric_limits<double>::infinity();
    std::vector<double> best_w;
    // Vertex weights support the per-coordinate minima, which covers most
    // extreme points; trying them first short-circuits the lattice scan.
    for (int v = 0; v < dim && best_slack > support_tol; ++v) {
      std::vector<double> w(dim, 0.0);
      w[v] = 1.0;
      double s = support_slack(w, weak_values, p);
      if (s < best_slack) {
        best_slack = s;
        best_w = w;
      }
    }
    for (const WeightVector& w : lattice) {
      if (best_slack <= support_tol) break;
      double s = support_slack(w.values(), weak_values, p);
      if (s < best_slack) {
        best_slack = s;
        best_w = w.values();
      }
      if (best_slack <= support_tol) break;
    }

    // Local refinement: pattern search over weight transfers between
    // coordinate pairs, halving the step.
    if (best_slack > support_tol) {
      double step = 1.0 / lattice_resolution;
      for (int level = 0; level < 20 && best_slack > support_tol; ++level) {
        bool improved = true;
        int moves = 0;
        while (improved && best_slack > support_tol && moves < 200) {
          improved = false;
          for (int i = 0; i < dim && best_slack > support_tol; ++i) {
            for (int j = 0; j < dim; ++j) {
              if (i == j || best_w[j] < step) continue;
              std::vector<double> w = best_w;
              w[i] += step;
              w[j] -= step;
              double s = support_slack(w, weak_values, p);
              if (s < best_slack) {
                best_slack = s;
                best_w = std::move(w);
                improved = true;
                ++moves;
              }
            }
          }
        }
        step *= 0.5;
      }
    }

    if (best_slack > support_tol) {
      WitnessRecord w;
      w.kind = "unsupported";
      w.points = {p, best_w};
      w.magnitude = best_slack;
      std::ostringstream detail;
      detail << "weak point " << format_point(p)
             << " lies above every supporting hyperplane by at least " << best_slack;
      w.detail = detail.str();
      report.witnesses.push_back(std::move(w));
    }
  }
  report.passed = report.witnesses.empty();
  std::ostringstream summary;
  if (report.passed) {
    summary << "all " << weak_values.size() << " weak points are supported";
  } else {
    summary << report.witnesses.size() << " of " << weak_values.size()
            << " weak points unsupported";
  }
  report.summary = summary.str();
  return report;
}

ConditionReport check_lemma1(const ParetoFront& front, double budget, double tol) {
  if (front.points.empty()) throw EmptyFront("label consistency check on an empty front");
  if (std::abs(front.budget - budget) > 1e-9 * std::max(1.0, std::abs(budget))) {
    std::ostringstream msg;
    msg << "front was built for budget " << front.budget << ", not " << budget;
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  auto weak = weak_distortions(front);
  ConditionReport report;
  report.check_name = "lemma1_consistency";
  report.tolerance = tol;
  if (weak.empty()) {
    report.passed = false;
    report.summary = "front labels no point weak";
    WitnessRecord w;
    w.kind = "undominated";
    w.detail = "no weak point exists to dominate anything";
    report.witnesses.push_back(std::move(w));
    return report;
  }
  for (const LabeledPoint& lp : front.points) {
    const std::vector<double>& p = lp.point.distortion.values;
    bool covered = false;
    double best_shortfall = std::numeric_limits<double>::infinity();
    for (const auto& [index, wv] : weak) {
      double shortfall = -std::numeric_limits<double>::infinity();
      for (size_t d = 0; d < p.size(); ++d) {
        shortfall = std::max(shortfall, wv[d] - p[d]);
      }
      best_shortfall = std::min(best_shortfall, shortfall);
      if (shortfall <= tol) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      WitnessRecord w;
      w.kind = "undominated";
      w.points = {p};
      w.magnitude = best_shortfall;
      std::ostringstream detail;
      detail << "point " << format_point(p) << " (" << point_label_name(lp.label)
             << ") is not equaled-or-dominated by any weak point (best shortfall "
             << best_shortfall << ")";
      w.detail = detail.str();
      report.witnesses.push_back(std::move(w));
    }
  }
  // Converse direction: a weak label must withstand strict dominance.
  for (const auto& [index, wv] : weak) {
    for (const LabeledPoint& other : front.points) {
      Order rel = compare(other.point.distortion, front.points[index].point.distortion);
      if (is_ll(rel)) {
        WitnessRecord w;
        w.kind = "mislabeled_weak";
        w.points = {wv, other.point.distortion.values};
        std::ostringstream detail;
        detail << "point " << format_point(wv) << " is labeled "
               << point_label_name(front.points[index].label) << " but "
               << format_point(other.point.distortion.values) << " strictly dominates it";
        w.detail = detail.str();
        report.witnesses.push_back(std::move(w));
        break;
      }
    }
  }
  report.passed = report.witnesses.empty();
  std::ostringstream summary;
  if (report.passed) {
    summary << "all " << front.points.size() << " points dominated by the weak front";
  } else {
    summary << report.witnesses.size() << " of " << front.points.size()
            << " points escape the weak front";
  }
  report.summary = summary.str();
  return report;
}

CoverageReport compare_S0_vs_weak_pareto(const S0Set& s0, const ParetoFront& front,
                                         double match_tolerance) {
  auto weak = weak_distortions(front);
  if (weak.empty()) throw EmptyFront("coverage comparison needs a nonempty weak front");
  if (s0.distinct_distortions.empty()) {
    throw Error(ErrorCode::empty_input, "scalarization sweep produced no minimizers");
  }
  size_t dim = weak[0].second.size();
  for (const DistortionVector& d : s0.distinct_distortions) {
    if (d.values.size() != dim) {
      throw Error(ErrorCode::dimension_mismatch, "sweep and front dimensions differ");
    }
  }
  CoverageReport report;
  report.weak_pareto_count = weak.size();
  report.match_tolerance = match_tolerance;
  for (const auto& [index, wv] : weak) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const DistortionVector& d : s0.distinct_distortions) {
      nearest = std::min(nearest, euclidean(wv, d.values));
      if (nearest <= match_tolerance) break;
    }
    if (nearest <= match_tolerance) {
      ++report.covered_count;
    } else {
      report.missed.push_back(DistortionVector{wv});
    }
  }
  return report;
}

}  // namespace bitalloc
