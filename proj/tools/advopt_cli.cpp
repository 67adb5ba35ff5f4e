// Command-line front end: generate, run, sweep, structural, estimate, analyze, plot.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "advopt/adversary.hpp"
#include "advopt/config.hpp"
#include "advopt/error.hpp"
#include "advopt/plans.hpp"
#include "advopt/report.hpp"
#include "advopt/sweep.hpp"

namespace fs = std::filesystem;
using namespace advopt;

namespace {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Configuration:
        case ErrorKind::InvalidInput:
        case ErrorKind::InvalidSize:
        case ErrorKind::Range:
        case ErrorKind::InvalidThreshold: return 2;
        case ErrorKind::Io: return 3;
        case ErrorKind::Parse:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::NoData:
        case ErrorKind::DegenerateInput: return 4;
    }
    return 1;
}

struct Common {
    std::string workdir = ".";
    std::optional<std::uint64_t> seed;
    std::string config;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
    cmd->add_option("--workdir", c.workdir, "Base directory for relative paths")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Master seed (overrides the config)");
    if (needs_config) cmd->add_option("--config", c.config, "Sweep config (JSON)")->required();
}

SweepConfig load(const Common& c) {
    const fs::path wd(c.workdir);
    fs::path cfg_path(c.config);
    if (cfg_path.is_relative()) cfg_path = wd / cfg_path;
    SweepConfig cfg = load_sweep_config(cfg_path, wd);
    if (c.seed) cfg.master_seed = *c.seed;
    return cfg;
}

fs::path in_workdir(const Common& c, const std::string& p) {
    fs::path path(p);
    return path.is_relative() ? fs::path(c.workdir) / path : path;
}

nlohmann::json outcome_json(const RunOutcome& o) {
    return {{"selections", o.selections},
            {"global_response", o.global_response},
            {"global_inefficiency", o.global_inefficiency},
            {"mean_discomfort", o.mean_discomfort()},
            {"iterations_used", o.iterations_used},
            {"inefficiency_trace", o.inefficiency_trace},
            {"cost_trace", o.cost_trace},
            {"mean_alpha", o.mean_alpha},
            {"mean_beta", o.mean_beta}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversarial hierarchical plan-selection simulator"};
    app.require_subcommand(1);

    // generate
    Common gen_common;
    std::size_t gen_agents = 100, gen_plans = 10, gen_dim = 2;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    std::vector<double> voting_levels;
    std::string targets_out;
    auto* gen = app.add_subcommand("generate", "Write synthetic Gaussian plan files and/or voting target signals");
    gen->add_option("--workdir", gen_common.workdir)->capture_default_str();
    gen->add_option("--agents", gen_agents)->capture_default_str();
    gen->add_option("--plans", gen_plans)->capture_default_str();
    gen->add_option("--dim", gen_dim)->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--out", gen_out, "Directory for agent_<id>.plans files");
    gen->add_option("--voting-levels", voting_levels, "Distinct levels; writes all permutations as targets")
        ->delimiter(',');
    gen->add_option("--targets-out", targets_out, "Directory for target_<i>.csv files");

    // run
    Common run_common;
    double run_beta = 1.0;
    std::string run_placement = "random";
    std::size_t run_count = 1, run_layer = 1, run_config_index = 0, run_index = 0, run_signal = 0, run_population = 0;
    unsigned run_percent = 100;
    auto* run_cmd = app.add_subcommand("run", "Run a single experiment and print its outcome as JSON");
    add_common(run_cmd, run_common, true);
    run_cmd->add_option("--beta", run_beta, "Adversarial severity in (0, 1]")->capture_default_str();
    run_cmd->add_option("--placement", run_placement)
        ->check(CLI::IsMember({"random", "layer", "cumulative-top-down", "cumulative-bottom-up"}))
        ->capture_default_str();
    run_cmd->add_option("--count", run_count, "Adversary count (random) or m (cumulative)")->capture_default_str();
    run_cmd->add_option("--layer", run_layer)->capture_default_str();
    run_cmd->add_option("--percent", run_percent)->check(CLI::IsMember({25, 50, 75, 100}))->capture_default_str();
    run_cmd->add_option("--config-index", run_config_index)->capture_default_str();
    run_cmd->add_option("--run-index", run_index)->capture_default_str();
    run_cmd->add_option("--signal", run_signal)->capture_default_str();
    run_cmd->add_option("--population", run_population)->capture_default_str();

    // sweep
    Common sweep_common;
    bool sweep_resume = false, sweep_analyze = false;
    std::optional<std::size_t> sweep_threads;
    auto* sweep = app.add_subcommand("sweep", "Scale x severity sweep with random placements");
    add_common(sweep, sweep_common, true);
    sweep->add_flag("--resume", sweep_resume, "Keep completed cells from an existing sweep.csv");
    sweep->add_option("--threads", sweep_threads);
    sweep->add_flag("--analyze", sweep_analyze, "Write the analysis bundle to <output_dir>/analysis");

    // structural
    Common struct_common;
    std::string struct_mode = "both";
    bool struct_resume = false;
    std::optional<std::size_t> struct_threads;
    auto* structural = app.add_subcommand("structural", "Layer-wise and cumulative placement sweeps");
    add_common(structural, struct_common, true);
    structural->add_option("--mode", struct_mode)
        ->check(CLI::IsMember({"layer-wise", "cumulative", "both"}))
        ->capture_default_str();
    structural->add_flag("--resume", struct_resume);
    structural->add_option("--threads", struct_threads);

    // estimate
    Common est_common;
    std::vector<std::string> est_modes;
    auto* estimate = app.add_subcommand("estimate", "Print the experiment count of a config");
    add_common(estimate, est_common, true);
    estimate->add_option("--modes", est_modes, "Subset of scale,layer-wise,cumulative")->delimiter(',');

    // analyze / plot
    Common an_common;
    std::vector<std::string> an_inputs;
    std::string an_out = "analysis";
    std::string discomfort_orientation = "high-is-resilient";
    std::size_t an_bins = 256;
    bool exclude_beta_one = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "Zones, Pareto knees, summaries and heatmaps from result CSVs");
    analyze_cmd->add_option("--workdir", an_common.workdir)->capture_default_str();
    analyze_cmd->add_option("--input", an_inputs, "Result CSV(s) from sweep/structural")->required();
    analyze_cmd->add_option("--out", an_out)->capture_default_str();
    analyze_cmd->add_option("--discomfort-orientation", discomfort_orientation)
        ->check(CLI::IsMember({"low-is-resilient", "high-is-resilient"}))
        ->capture_default_str();
    analyze_cmd->add_option("--bins", an_bins)->capture_default_str();
    analyze_cmd->add_flag("--exclude-beta-one", exclude_beta_one, "Leave beta = 1 out of heatmaps");

    Common plot_common;
    std::vector<std::string> plot_inputs;
    std::string plot_out = "plots";
    bool plot_exclude = false;
    auto* plot = app.add_subcommand("plot", "SVG heatmaps only");
    plot->add_option("--workdir", plot_common.workdir)->capture_default_str();
    plot->add_option("--input", plot_inputs)->required();
    plot->add_option("--out", plot_out)->capture_default_str();
    plot->add_flag("--exclude-beta-one", plot_exclude);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            if (gen_out.empty() && targets_out.empty()) throw Error(ErrorKind::Configuration, "nothing to generate");
            if (!gen_out.empty()) {
                const auto sets = generate_gaussian_plans(gen_agents, gen_plans, gen_dim, gen_seed);
                write_plan_sets(in_workdir(gen_common, gen_out), sets);
                std::cout << "wrote " << sets.size() << " plan files to " << gen_out << '\n';
            }
            if (!targets_out.empty()) {
                const auto targets = generate_voting_targets(voting_levels, voting_levels.size());
                const fs::path dir = in_workdir(gen_common, targets_out);
                fs::create_directories(dir);
                for (std::size_t i = 0; i < targets.size(); ++i)
                    write_target_file(dir / ("target_" + std::to_string(i) + ".csv"), targets[i]);
                std::cout << "wrote " << targets.size() << " target signals to " << targets_out << '\n';
            }
        } else if (*run_cmd) {
            const auto cfg = load(run_common);
            AttackSpec attack;
            attack.severity = run_beta;
            attack.placement = parse_placement(run_placement);
            attack.count = run_count;
            attack.layer = run_layer;
            attack.percent = run_percent;
            attack.config_index = run_config_index;
            attack.cap = cfg.combination_cap;
            const auto single = run_single(cfg, attack, run_index, run_signal, run_population);
            nlohmann::json j{{"row", format_row(single.row)},
                             {"adversaries", single.adversaries},
                             {"outcome", outcome_json(single.outcome)},
                             {"baseline", outcome_json(single.baseline)}};
            std::cout << j.dump(2) << '\n';
        } else if (*sweep) {
            const auto cfg = load(sweep_common);
            SweepOptions opt;
            opt.resume = sweep_resume;
            opt.threads = sweep_threads;
            const auto result = run_sweep(cfg, opt);
            std::cout << result.rows.size() << " rows -> " << result.csv_path.string() << '\n';
            if (sweep_analyze) write_analysis(analyze(result.grid), cfg.output_dir / "analysis");
            if (result.failed_units > 0) {
                std::cerr << "error [runtime]: " << result.failed_units << " cells failed\n";
                return 1;
            }
        } else if (*structural) {
            const auto cfg = load(struct_common);
            SweepOptions opt;
            opt.resume = struct_resume;
            opt.threads = struct_threads;
            std::vector<SweepMode> modes;
            if (struct_mode != "cumulative") modes.push_back(SweepMode::LayerWise);
            if (struct_mode != "layer-wise") modes.push_back(SweepMode::Cumulative);
            std::size_t failed = 0;
            for (SweepMode m : modes) {
                const auto result = run_structural(cfg, m, opt);
                failed += result.failed_units;
                std::cout << result.rows.size() << " rows -> " << result.csv_path.string() << '\n';
            }
            if (failed > 0) {
                std::cerr << "error [runtime]: " << failed << " cells failed\n";
                return 1;
            }
        } else if (*estimate) {
            const auto cfg = load(est_common);
            std::vector<SweepMode> modes = cfg.modes;
            if (!est_modes.empty()) {
                modes.clear();
                for (const auto& m : est_modes) modes.push_back(parse_sweep_mode(m));
            }
            std::cout << estimate_experiment_count(cfg, modes) << '\n';
        } else if (*analyze_cmd || *plot) {
            const bool is_plot = plot->parsed();
            const Common& c = is_plot ? plot_common : an_common;
            std::vector<ResultRow> rows;
            for (const auto& in : is_plot ? plot_inputs : an_inputs) {
                auto part = read_rows(in_workdir(c, in));
                rows.insert(rows.end(), part.begin(), part.end());
            }
            AnalyzeOptions opt;
            opt.bins = an_bins;
            opt.orientation[1] = discomfort_orientation == "low-is-resilient" ? Orientation::LowIsResilient
                                                                              : Orientation::HighIsResilient;
            const auto bundle = analyze(aggregate_rows(rows), opt);
            PlotOptions plot_opt{is_plot ? plot_exclude : exclude_beta_one};
            const fs::path out = in_workdir(c, is_plot ? plot_out : an_out);
            if (is_plot) write_heatmaps(bundle, out, plot_opt);
            else write_analysis(bundle, out, plot_opt);
            std::cout << bundle.groups.size() << " groups -> " << out.string() << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error [runtime]: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
