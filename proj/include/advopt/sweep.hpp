#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "advopt/analytics.hpp"
#include "advopt/config.hpp"

namespace advopt {

/// One experiment, one CSV line.
struct ResultRow {
    std::string dataset;
    std::size_t signal_id = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t run_seed = 0;
    double beta = 0.0;
    std::size_t adv_count = 0;
    double adv_fraction = 0.0;
    std::string placement_mode;  // random | layer | cumulative
    std::optional<std::size_t> layer;
    std::string direction;       // cumulative only
    std::optional<std::size_t> m;
    double inefficiency = 0.0;
    double discomfort_total = 0.0;
    double discomfort_legit = 0.0;
    double compromised = 0.0;
    std::size_t iterations = 0;

    bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kResultHeader =
    "dataset,signal_id,master_seed,run_seed,beta,adv_count,adv_fraction,placement_mode,layer,direction,m,"
    "inefficiency,discomfort_total,discomfort_legit,compromised,iterations";

std::string format_row(const ResultRow& row);
ResultRow parse_row(const std::string& line);

/// Reads a result CSV (header required). Throws Error(Parse) with the line number.
std::vector<ResultRow> read_rows(const std::filesystem::path& file);
/// Writes header plus rows in canonical sorted order.
void write_sorted_rows(const std::filesystem::path& file, std::vector<ResultRow> rows);
void sort_rows(std::vector<ResultRow>& rows);

/// Identity of the aggregation cell a row belongs to (everything but run_seed and metrics).
std::string cell_key(const ResultRow& row);

struct GridCell {
    std::string dataset;
    std::size_t signal_id = 0;
    std::size_t adv_count = 0;
    MetricPoint metrics;
};

struct StructuralCell {
    std::string dataset;
    std::size_t signal_id = 0;
    std::string mode;  // layer | cumulative
    std::size_t layer = 0;
    std::string direction;
    std::size_t m = 0;
    std::size_t adv_count = 0;
    MetricPoint metrics;
};

/// Per-cell means. `cells` hold the random-placement (scale x severity) matrix.
struct SweepGrid {
    std::vector<GridCell> cells;
    std::vector<StructuralCell> structural;
};

SweepGrid aggregate_rows(const std::vector<ResultRow>& rows);

struct SweepOptions {
    bool resume = false;
    std::optional<std::size_t> threads;  // overrides cfg.threads
    bool write_csv = true;
};

struct SweepResult {
    std::vector<ResultRow> rows;  // sorted
    SweepGrid grid;
    std::size_t failed_units = 0;
    std::filesystem::path csv_path;
};

/// Scale x severity sweep with random placements; results in <output_dir>/sweep.csv.
SweepResult run_sweep(const SweepConfig& cfg, const SweepOptions& options = {});

/// Layer-wise or cumulative placements; results in <output_dir>/structural-<mode>.csv.
SweepResult run_structural(const SweepConfig& cfg, SweepMode mode, const SweepOptions& options = {});

/// Experiment count for the configured grids and modes, without running anything.
std::uint64_t estimate_experiment_count(const SweepConfig& cfg);
std::uint64_t estimate_experiment_count(const SweepConfig& cfg, const std::vector<SweepMode>& modes);

/// Sum over layers of a breadth-first binary tree of n agents and distinct k_p of min(cap, C(|A_L|, k_p)).
std::uint64_t layer_configuration_count(std::size_t n, std::size_t cap = kDefaultCombinationCap);

/// Gaussian accounting: sum over agent counts of n * severities * plan-grid size * permutations.
std::uint64_t gaussian_experiment_count(const std::vector<std::size_t>& agents, std::size_t plan_grid_size,
                                        std::size_t severities, std::size_t permutations);

/// A single experiment for the `run` subcommand.
struct SingleRun {
    RunOutcome outcome;
    RunOutcome baseline;
    ResultRow row;
    std::vector<AgentId> adversaries;
};

SingleRun run_single(const SweepConfig& cfg, const AttackSpec& attack, std::size_t run_index,
                     std::size_t signal_id = 0, std::size_t population = 0);

}  // namespace advopt
