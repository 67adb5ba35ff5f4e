#include "advopt/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "advopt/error.hpp"
#include "advopt/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace advopt {

std::string to_string(SweepMode m) {
    switch (m) {
        case SweepMode::Scale: return "scale";
        case SweepMode::LayerWise: return "layer-wise";
        case SweepMode::Cumulative: return "cumulative";
    }
    return "scale";
}

SweepMode parse_sweep_mode(const std::string& s) {
    if (s == "scale") return SweepMode::Scale;
    if (s == "layer-wise") return SweepMode::LayerWise;
    if (s == "cumulative") return SweepMode::Cumulative;
    throw Error(ErrorKind::Configuration, "unknown mode '" + s + "'");
}

bool SweepConfig::has_mode(SweepMode m) const { return std::find(modes.begin(), modes.end(), m) != modes.end(); }

namespace {

fs::path resolve(const fs::path& workdir, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : workdir / path;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text, const fs::path& workdir) {
    SweepConfig cfg;
    try {
        const json j = json::parse(json_text);
        if (!j.contains("dataset")) throw Error(ErrorKind::Configuration, "missing 'dataset'");
        const json& ds = j.at("dataset");
        cfg.dataset.name = get_or<std::string>(ds, "name", "dataset");
        const std::string kind = get_or<std::string>(ds, "kind", ds.contains("path") ? "files" : "gaussian");
        if (kind == "files") {
            cfg.dataset.plan_dir = resolve(workdir, ds.at("path").get<std::string>());
            if (ds.contains("agents")) cfg.dataset.agents_hint = ds.at("agents").get<std::size_t>();
        } else if (kind == "gaussian") {
            GaussianSpec g;
            auto as_list = [](const json& v) {
                return v.is_array() ? v.get<std::vector<std::size_t>>() : std::vector<std::size_t>{v.get<std::size_t>()};
            };
            if (ds.contains("agents")) g.agents = as_list(ds.at("agents"));
            if (ds.contains("plans")) g.plans = as_list(ds.at("plans"));
            g.dim = get_or<std::size_t>(ds, "dim", 2);
            cfg.dataset.gaussian = g;
        } else {
            throw Error(ErrorKind::Configuration, "unknown dataset kind '" + kind + "'");
        }

        cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed);
        if (j.contains("severities")) cfg.severities = j.at("severities").get<std::vector<double>>();
        if (j.contains("scales") && !j.at("scales").is_string())
            cfg.scales = j.at("scales").get<std::vector<std::size_t>>();
        cfg.runs_per_cell = get_or<std::size_t>(j, "runs_per_cell", cfg.runs_per_cell);
        if (j.contains("modes")) {
            cfg.modes.clear();
            for (const auto& m : j.at("modes")) cfg.modes.push_back(parse_sweep_mode(m.get<std::string>()));
        }
        cfg.combination_cap = get_or<std::size_t>(j, "combination_cap", cfg.combination_cap);
        cfg.max_iterations = get_or<std::size_t>(j, "max_iterations", cfg.max_iterations);
        const std::string init = get_or<std::string>(j, "initial_selection", "first-plan");
        if (init == "first-plan") cfg.initial_selection = InitialSelection::FirstPlan;
        else if (init == "random") cfg.initial_selection = InitialSelection::Random;
        else throw Error(ErrorKind::Configuration, "unknown initial_selection '" + init + "'");
        cfg.branch_approval = get_or<bool>(j, "branch_approval", cfg.branch_approval);
        cfg.output_dir = resolve(workdir, get_or<std::string>(j, "output_dir", "out"));
        cfg.threads = get_or<std::size_t>(j, "threads", 0);

        if (j.contains("inefficiency")) {
            const json& in = j.at("inefficiency");
            cfg.inefficiency.kind = parse_inefficiency_kind(get_or<std::string>(in, "kind", "variance"));
            cfg.inefficiency.scaling = parse_scaling(get_or<std::string>(in, "scaling", "identity"));
            if (in.contains("target_file"))
                cfg.inefficiency.target_files.push_back(resolve(workdir, in.at("target_file").get<std::string>()));
            if (in.contains("target_files"))
                for (const auto& f : in.at("target_files"))
                    cfg.inefficiency.target_files.push_back(resolve(workdir, f.get<std::string>()));
            if (in.contains("voting_levels"))
                cfg.inefficiency.voting_levels = in.at("voting_levels").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Configuration, std::string("config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

SweepConfig load_sweep_config(const fs::path& file, const fs::path& workdir) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Configuration, "cannot read config " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str(), workdir);
}

void validate(const SweepConfig& cfg) {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::Configuration, m); };
    if (cfg.dataset.plan_dir.has_value() == cfg.dataset.gaussian.has_value())
        fail("dataset must be exactly one of a plan directory or a gaussian spec");
    if (cfg.dataset.gaussian) {
        const auto& g = *cfg.dataset.gaussian;
        if (g.agents.empty() || g.plans.empty()) fail("gaussian agents/plans grids must be non-empty");
        if (g.dim == 0) fail("gaussian dim must be >= 1");
        for (auto a : g.agents)
            if (a == 0) fail("gaussian agent count must be >= 1");
        for (auto k : g.plans)
            if (k == 0) fail("gaussian plan count must be >= 1");
    }
    if (cfg.runs_per_cell == 0) fail("runs_per_cell must be >= 1");
    if (cfg.severities.empty()) fail("severity grid is empty");
    for (double b : cfg.severities)
        if (!(b > 0.0 && b <= 1.0)) fail("severities must lie in (0, 1]");
    for (auto s : cfg.scales)
        if (s == 0) fail("scales must be >= 1");
    if (cfg.modes.empty()) fail("no sweep modes");
    if (cfg.combination_cap == 0) fail("combination_cap must be >= 1");
    if (cfg.max_iterations == 0) fail("max_iterations must be >= 1");
    const auto& in = cfg.inefficiency;
    if (in.kind == InefficiencyKind::Rss && in.target_files.empty() && in.voting_levels.empty())
        fail("rss inefficiency needs target_file(s) or voting_levels");
    if (in.kind == InefficiencyKind::Variance && (!in.target_files.empty() || !in.voting_levels.empty()))
        fail("variance inefficiency takes no targets");
}

std::vector<std::size_t> population_sizes(const SweepConfig& cfg) {
    std::vector<std::size_t> sizes;
    if (cfg.dataset.gaussian) {
        for (auto n : cfg.dataset.gaussian->agents)
            for ([[maybe_unused]] auto k : cfg.dataset.gaussian->plans) sizes.push_back(n);
    } else if (cfg.dataset.agents_hint && !fs::exists(*cfg.dataset.plan_dir)) {
        sizes.push_back(*cfg.dataset.agents_hint);
    } else {
        sizes.push_back(count_plan_files(*cfg.dataset.plan_dir));
    }
    return sizes;
}

std::vector<Population> load_populations(const SweepConfig& cfg) {
    std::vector<Population> pops;
    if (cfg.dataset.gaussian) {
        const auto& g = *cfg.dataset.gaussian;
        for (auto n : g.agents)
            for (auto k : g.plans) {
                const auto seed = derive_seed(cfg.master_seed, {0x706c616e73ULL, n, k, g.dim});
                pops.push_back({cfg.dataset.name + "-n" + std::to_string(n) + "-k" + std::to_string(k),
                                generate_gaussian_plans(n, k, g.dim, seed)});
            }
    } else {
        pops.push_back({cfg.dataset.name, load_plan_sets(*cfg.dataset.plan_dir)});
    }
    return pops;
}

std::size_t signal_count(const SweepConfig& cfg) {
    const auto& in = cfg.inefficiency;
    if (in.kind == InefficiencyKind::Variance) return 1;
    std::size_t count = in.target_files.size();
    if (!in.voting_levels.empty()) {
        std::size_t f = 1;
        for (std::size_t i = 2; i <= in.voting_levels.size(); ++i) f *= i;
        count += f;
    }
    return count;
}

std::vector<InefficiencyFn> load_signals(const SweepConfig& cfg) {
    const auto& in = cfg.inefficiency;
    if (in.kind == InefficiencyKind::Variance) return {InefficiencyFn::variance()};
    std::vector<InefficiencyFn> fns;
    for (const auto& f : in.target_files) fns.push_back(InefficiencyFn::rss(read_target_file(f), in.scaling));
    if (!in.voting_levels.empty())
        for (auto& t : generate_voting_targets(in.voting_levels, in.voting_levels.size()))
            fns.push_back(InefficiencyFn::rss(std::move(t), in.scaling));
    return fns;
}

RunConfig make_run_config(const SweepConfig& cfg, const InefficiencyFn& fn, std::uint64_t rng_seed) {
    RunConfig rc;
    rc.max_iterations = cfg.max_iterations;
    rc.inefficiency = fn;
    rc.rng_seed = rng_seed;
    rc.initial_selection = cfg.initial_selection;
    rc.branch_approval = cfg.branch_approval;
    return rc;
}

}  // namespace advopt
