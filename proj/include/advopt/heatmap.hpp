#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advopt/analytics.hpp"

namespace advopt {

/// Dense heatmap: rows are severities, columns adversary counts. Missing cells are NaN.
struct HeatmapData {
    std::string title;
    std::vector<double> row_values;     // beta
    std::vector<double> column_values;  // adversary fraction
    std::vector<std::vector<double>> values;
    std::vector<std::vector<std::optional<RvcLabel>>> labels;
    std::vector<std::pair<std::size_t, std::size_t>> row_knees;     // (row, col)
    std::vector<std::pair<std::size_t, std::size_t>> column_knees;  // (row, col)
};

/// Standalone SVG: colored cell grid, R/V/C zone boundaries, knee markers.
std::string render_heatmap_svg(const HeatmapData& data);

/// Companion matrix CSV: `beta,<fraction...>` header, one row per severity.
std::string render_heatmap_csv(const HeatmapData& data);

}  // namespace advopt
