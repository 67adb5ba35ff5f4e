#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace advopt {

struct Plan {
    std::vector<double> values;
    double discomfort = 0.0;

    bool operator==(const Plan&) const = default;
};

/// Candidate plans of one agent. Plan order is the tie-breaking order.
struct PlanSet {
    std::int64_t agent_id = 0;
    std::vector<Plan> plans;

    std::size_t size() const noexcept { return plans.size(); }
    std::size_t dim() const noexcept { return plans.empty() ? 0 : plans.front().values.size(); }

    bool operator==(const PlanSet&) const = default;
};

struct TargetSignal {
    std::vector<double> values;

    bool operator==(const TargetSignal&) const = default;
};

struct LoadOptions {
    bool require_uniform_plan_count = true;
};

// Plan file format: `agent_<id>.plans`, one plan per line, `<discomfort>:<v1>,...,<vd>`.

Plan parse_plan_line(std::string_view line);
std::string format_plan_line(const Plan& plan);

PlanSet read_plan_file(const std::filesystem::path& file, std::int64_t agent_id);
void write_plan_file(const std::filesystem::path& file, const PlanSet& set);

/// Loads every `agent_<id>.plans` file in `dir`, sorted by id.
std::vector<PlanSet> load_plan_sets(const std::filesystem::path& dir, LoadOptions options = {});
void write_plan_sets(const std::filesystem::path& dir, std::span<const PlanSet> sets);

/// Number of `agent_<id>.plans` files in a directory without parsing them.
std::size_t count_plan_files(const std::filesystem::path& dir);

TargetSignal read_target_file(const std::filesystem::path& file);
void write_target_file(const std::filesystem::path& file, const TargetSignal& target);

/// i.i.d. N(0,1) plan values; discomfort of plan i is its zero-based rank i.
std::vector<PlanSet> generate_gaussian_plans(std::size_t n_agents, std::size_t k_plans, std::size_t dim,
                                             std::uint64_t seed);

/// All |levels|! orderings of the given distinct levels, in lexicographic order.
std::vector<TargetSignal> generate_voting_targets(std::span<const double> levels, std::size_t dim);

/// Throws DimensionMismatch / InvalidSize / InvalidInput if the sets are not a usable population.
void validate_plan_sets(std::span<const PlanSet> sets);

}  // namespace advopt
