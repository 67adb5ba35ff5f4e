#include "advopt/plans.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "advopt/error.hpp"
#include "advopt/rng.hpp"

namespace fs = std::filesystem;

namespace advopt {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
        throw Error(ErrorKind::Parse, "invalid number '" + std::string(token) + "'");
    return value;
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<double> parse_csv_reals(std::string_view s) {
    std::vector<double> out;
    while (true) {
        auto comma = s.find(',');
        out.push_back(parse_real(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::string join_reals(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_real(values[i]);
    }
    return out;
}

// Returns the id for names of the form agent_<int>.plans.
std::optional<std::int64_t> plan_file_id(const fs::path& p) {
    if (p.extension() != ".plans") return std::nullopt;
    const std::string stem = p.stem().string();
    if (stem.rfind("agent_", 0) != 0) return std::nullopt;
    std::string_view digits = std::string_view(stem).substr(6);
    std::int64_t id = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return id;
}

}  // namespace

Plan parse_plan_line(std::string_view line) {
    line = trim(line);
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorKind::Parse, "missing ':' separator");
    Plan plan;
    plan.discomfort = parse_real(line.substr(0, colon));
    if (plan.discomfort < 0) throw Error(ErrorKind::Parse, "negative discomfort");
    plan.values = parse_csv_reals(line.substr(colon + 1));
    return plan;
}

std::string format_plan_line(const Plan& plan) {
    return format_real(plan.discomfort) + ":" + join_reals(plan.values);
}

PlanSet read_plan_file(const fs::path& file, std::int64_t agent_id) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    PlanSet set{agent_id, {}};
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (trim(line).empty()) continue;
        try {
            set.plans.push_back(parse_plan_line(line));
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, file.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (set.plans.back().values.size() != set.plans.front().values.size())
            throw Error(ErrorKind::DimensionMismatch,
                        file.string() + ":" + std::to_string(lineno) + ": plan length differs from first plan");
    }
    if (set.plans.empty()) throw Error(ErrorKind::NoData, file.string() + " contains no plans");
    return set;
}

void write_plan_file(const fs::path& file, const PlanSet& set) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
    for (const auto& plan : set.plans) out << format_plan_line(plan) << '\n';
}

std::size_t count_plan_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, dir.string() + " is not a directory");
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && plan_file_id(entry.path())) ++count;
    return count;
}

std::vector<PlanSet> load_plan_sets(const fs::path& dir, LoadOptions options) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, dir.string() + " is not a directory");
    std::vector<std::pair<std::int64_t, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (auto id = plan_file_id(entry.path())) files.emplace_back(*id, entry.path());
    }
    if (files.empty()) throw Error(ErrorKind::NoData, "no agent_<id>.plans files in " + dir.string());
    std::sort(files.begin(), files.end());

    std::vector<PlanSet> sets;
    sets.reserve(files.size());
    for (const auto& [id, path] : files) {
        sets.push_back(read_plan_file(path, id));
        const auto& first = sets.front();
        const auto& last = sets.back();
        if (last.dim() != first.dim())
            throw Error(ErrorKind::DimensionMismatch, path.string() + ": plan dimension " + std::to_string(last.dim()) +
                                                          " != " + std::to_string(first.dim()));
        if (options.require_uniform_plan_count && last.size() != first.size())
            throw Error(ErrorKind::DimensionMismatch, path.string() + ": plan count " + std::to_string(last.size()) +
                                                          " != " + std::to_string(first.size()));
    }
    return sets;
}

void write_plan_sets(const fs::path& dir, std::span<const PlanSet> sets) {
    fs::create_directories(dir);
    for (const auto& set : sets)
        write_plan_file(dir / ("agent_" + std::to_string(set.agent_id) + ".plans"), set);
}

TargetSignal read_target_file(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    std::string line;
    while (std::getline(in, line) && trim(line).empty()) {}
    if (trim(line).empty()) throw Error(ErrorKind::NoData, file.string() + " is empty");
    try {
        return TargetSignal{parse_csv_reals(trim(line))};
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, file.string() + ": " + e.what());
    }
}

void write_target_file(const fs::path& file, const TargetSignal& target) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
    out << join_reals(target.values) << '\n';
}

std::vector<PlanSet> generate_gaussian_plans(std::size_t n_agents, std::size_t k_plans, std::size_t dim,
                                             std::uint64_t seed) {
    if (n_agents == 0 || k_plans == 0 || dim == 0)
        throw Error(ErrorKind::InvalidSize, "gaussian plans need agents, plans and dim >= 1");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<PlanSet> sets(n_agents);
    for (std::size_t a = 0; a < n_agents; ++a) {
        sets[a].agent_id = static_cast<std::int64_t>(a);
        sets[a].plans.resize(k_plans);
        for (std::size_t i = 0; i < k_plans; ++i) {
            auto& plan = sets[a].plans[i];
            plan.discomfort = static_cast<double>(i);
            plan.values.resize(dim);
            for (auto& v : plan.values) v = normal(rng);
        }
    }
    return sets;
}

std::vector<TargetSignal> generate_voting_targets(std::span<const double> levels, std::size_t dim) {
    if (levels.empty()) throw Error(ErrorKind::InvalidInput, "no levels");
    if (dim != levels.size())
        throw Error(ErrorKind::DimensionMismatch, "target dim must equal the number of levels");
    std::vector<double> sorted(levels.begin(), levels.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorKind::InvalidInput, "duplicate levels");
    std::vector<TargetSignal> out;
    do {
        out.push_back(TargetSignal{sorted});
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return out;
}

void validate_plan_sets(std::span<const PlanSet> sets) {
    if (sets.empty()) throw Error(ErrorKind::NoData, "empty population");
    const std::size_t d = sets.front().dim();
    for (const auto& set : sets) {
        if (set.plans.empty())
            throw Error(ErrorKind::InvalidSize, "agent " + std::to_string(set.agent_id) + " has no plans");
        for (const auto& plan : set.plans) {
            if (plan.values.size() != d || d == 0)
                throw Error(ErrorKind::DimensionMismatch, "agent " + std::to_string(set.agent_id) + " plan length");
            if (!(plan.discomfort >= 0))
                throw Error(ErrorKind::InvalidInput, "agent " + std::to_string(set.agent_id) + " negative discomfort");
        }
    }
}

}  // namespace advopt
