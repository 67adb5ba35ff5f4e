#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "advopt/analytics.hpp"
#include "advopt/heatmap.hpp"
#include "advopt/sweep.hpp"

namespace advopt {

enum class Metric { Inefficiency, Discomfort, Compromised };
inline constexpr std::array<Metric, 3> kMetrics{Metric::Inefficiency, Metric::Discomfort, Metric::Compromised};

std::string to_string(Metric m);
double metric_value(const MetricPoint& p, Metric m);

struct AnalyzeOptions {
    std::size_t classes = 3;
    std::size_t bins = 256;
    /// Low discomfort means adversaries got their way, so it sits on the collapse side by default.
    std::array<Orientation, 3> orientation{Orientation::LowIsResilient, Orientation::HighIsResilient,
                                           Orientation::LowIsResilient};
};

struct Segmentation {
    Metric metric = Metric::Inefficiency;
    Orientation orientation = Orientation::LowIsResilient;
    std::optional<std::pair<double, double>> thresholds;  // empty for degenerate grids
};

struct KneeRecord {
    std::string axis;        // "beta-row" (fixed severity) or "scale-column" (fixed adversary count)
    double fixed_value = 0;  // beta or adversary count
    std::vector<Point2> front;
    Point2 knee;
    std::size_t knee_cell = 0;  // index into GroupAnalysis::cells
};

struct GroupAnalysis {
    std::string dataset;
    std::size_t signal_id = 0;
    std::vector<GridCell> cells;
    std::array<Segmentation, 3> segmentation;
    std::vector<std::array<RvcLabel, 3>> labels;  // per cell, per metric
    std::vector<KneeRecord> knees;
};

struct AnalysisBundle {
    std::vector<GroupAnalysis> groups;
    std::vector<StructuralCell> structural;
};

/// Otsu zones per metric and Pareto knees per severity row and per scale column,
/// for every (dataset, signal) group of the grid.
AnalysisBundle analyze(const SweepGrid& grid, const AnalyzeOptions& options = {});

struct PlotOptions {
    bool exclude_beta_one = false;
};

HeatmapData make_heatmap(const GroupAnalysis& group, Metric metric, const PlotOptions& options = {});

/// Writes cells.csv, thresholds.csv, knees.csv, fronts.csv, structural summaries and heatmaps.
void write_analysis(const AnalysisBundle& bundle, const std::filesystem::path& out_dir,
                    const PlotOptions& plot = {});

/// Only the SVG heatmaps and their matrix CSVs.
void write_heatmaps(const AnalysisBundle& bundle, const std::filesystem::path& out_dir, const PlotOptions& plot = {});

}  // namespace advopt
