#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "advopt/adversary.hpp"
#include "advopt/costs.hpp"
#include "advopt/engine.hpp"
#include "advopt/plans.hpp"

namespace advopt {

struct GaussianSpec {
    std::vector<std::size_t> agents{100};
    std::vector<std::size_t> plans{10};
    std::size_t dim = 2;
};

struct DatasetSpec {
    std::string name = "dataset";
    std::optional<std::filesystem::path> plan_dir;  // file-backed dataset
    std::optional<GaussianSpec> gaussian;           // synthetic dataset
    /// Agent count hint for estimation when the plan directory is not available.
    std::optional<std::size_t> agents_hint;
};

struct InefficiencySpec {
    InefficiencyKind kind = InefficiencyKind::Variance;
    Scaling scaling = Scaling::Identity;
    std::vector<std::filesystem::path> target_files;
    std::vector<double> voting_levels;  // generates |levels|! targets when non-empty
};

enum class SweepMode { Scale, LayerWise, Cumulative };

std::string to_string(SweepMode m);
SweepMode parse_sweep_mode(const std::string& s);

struct SweepConfig {
    DatasetSpec dataset;
    std::uint64_t master_seed = 1;
    std::vector<double> severities = severity_grid();
    std::vector<std::size_t> scales;  // adversary counts; empty = 1..n
    std::size_t runs_per_cell = 100;
    std::vector<SweepMode> modes{SweepMode::Scale, SweepMode::LayerWise, SweepMode::Cumulative};
    std::size_t combination_cap = kDefaultCombinationCap;
    InefficiencySpec inefficiency;
    std::size_t max_iterations = 40;
    InitialSelection initial_selection = InitialSelection::FirstPlan;
    bool branch_approval = true;
    std::filesystem::path output_dir = "out";
    std::size_t threads = 0;  // 0 = hardware concurrency

    bool has_mode(SweepMode m) const;
};

/// Parses a JSON sweep config. Relative paths are resolved against `workdir`.
SweepConfig parse_sweep_config(const std::string& json_text, const std::filesystem::path& workdir);
SweepConfig load_sweep_config(const std::filesystem::path& file, const std::filesystem::path& workdir);

/// Throws Error(Configuration) for invalid grids or dataset specs.
void validate(const SweepConfig& cfg);

/// One concrete agent population of a dataset (gaussian specs expand into several).
struct Population {
    std::string name;
    std::vector<PlanSet> plan_sets;
    std::size_t agents() const noexcept { return plan_sets.size(); }
};

std::vector<Population> load_populations(const SweepConfig& cfg);

/// Agent counts of each population without loading plans.
std::vector<std::size_t> population_sizes(const SweepConfig& cfg);

/// One inefficiency function per target signal (a single function for variance).
std::vector<InefficiencyFn> load_signals(const SweepConfig& cfg);
std::size_t signal_count(const SweepConfig& cfg);

RunConfig make_run_config(const SweepConfig& cfg, const InefficiencyFn& fn, std::uint64_t rng_seed);

}  // namespace advopt
