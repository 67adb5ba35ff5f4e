#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "advopt/engine.hpp"

namespace advopt {

/// Per-cell means over run_count runs.
struct MetricPoint {
    double beta = 0.0;
    double adversary_fraction = 0.0;
    double inefficiency = 0.0;
    double discomfort_total = 0.0;
    double discomfort_legitimate = 0.0;
    double compromised = 0.0;
    std::size_t run_count = 0;
};

enum class RvcLabel { Resilience, Vulnerability, Collapse };

std::string to_string(RvcLabel label);
char short_label(RvcLabel label);

/// Which end of the value range is the healthy one.
enum class Orientation { LowIsResilient, HighIsResilient };

/// Mean discomfort of the legitimate agents in `with_adv` minus their mean in `baseline`.
/// An empty legitimate set yields 0 and a warning.
double compromised_discomfort(const RunOutcome& with_adv, const RunOutcome& baseline,
                              std::span<const AgentId> legitimate);

/// Same metric over raw per-agent discomfort vectors; silent on an empty legitimate set.
double compromised_discomfort(std::span<const double> with_adv, std::span<const double> baseline,
                              std::span<const AgentId> legitimate);

/// Mean discomfort over a subset of agents; 0 for an empty subset.
double mean_discomfort_of(const RunOutcome& outcome, std::span<const AgentId> agents);

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

/// Non-dominated subset (both axes minimized), sorted by x. Duplicates collapse to one.
std::vector<Point2> pareto_front(std::span<const Point2> points);

/// Front member closest in Manhattan distance to the ideal point after min-max
/// normalizing each axis over the front. Ties go to the lower raw x.
Point2 knee_mmd(std::span<const Point2> front);

/// Index into `front` of the knee_mmd point.
std::size_t knee_index(std::span<const Point2> front);

/// Equal-width histogram of `bins` bins over [min, max]. Bin i covers
/// (min + i*w, min + (i+1)*w]; bin 0 also holds min.
std::size_t histogram_bin(double value, double min, double max, std::size_t bins);
double bin_edge(std::size_t cut_after_bin, double min, double max, std::size_t bins);

/// Exhaustive multi-level Otsu: thresholds (ascending, at bin edges) that
/// maximize between-class variance. Over a plateau of equally good cuts the
/// middle cut of each threshold is taken.
std::vector<double> multi_otsu(std::span<const double> values, std::size_t classes = 3, std::size_t bins = 256);

/// value <= t1 -> first band, t1 < value <= t2 -> middle, value > t2 -> last band.
RvcLabel classify_rvc(double value, double t1, double t2, Orientation orientation = Orientation::LowIsResilient);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace advopt
