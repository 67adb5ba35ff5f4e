#include "advopt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <future>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "advopt/error.hpp"
#include "advopt/log.hpp"
#include "advopt/rng.hpp"

namespace fs = std::filesystem;

namespace advopt {

namespace {

constexpr std::uint64_t kScaleTag = 0x7363616c65ULL;
constexpr std::uint64_t kStructuralTag = 0x7374727563ULL;
constexpr std::uint64_t kLayerTag = 0x6c61796572ULL;
// Placement draws ignore the adversary count, so within a run the adversary sets
// of increasing scales are nested prefixes of one seeded shuffle.
constexpr std::uint64_t kPlacementTag = 0x706c616365ULL;

std::string fmt_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <typename T>
T parse_num(const std::string& s, const char* field) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorKind::Parse, std::string("bad ") + field + " '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

std::string format_row(const ResultRow& r) {
    std::ostringstream os;
    os << r.dataset << ',' << r.signal_id << ',' << r.master_seed << ',' << r.run_seed << ',' << fmt_real(r.beta) << ','
       << r.adv_count << ',' << fmt_real(r.adv_fraction) << ',' << r.placement_mode << ','
       << (r.layer ? std::to_string(*r.layer) : "") << ',' << r.direction << ','
       << (r.m ? std::to_string(*r.m) : "") << ',' << fmt_real(r.inefficiency) << ',' << fmt_real(r.discomfort_total)
       << ',' << fmt_real(r.discomfort_legit) << ',' << fmt_real(r.compromised) << ',' << r.iterations;
    return os.str();
}

ResultRow parse_row(const std::string& line) {
    const auto f = split(line, ',');
    if (f.size() != 16) throw Error(ErrorKind::Parse, "expected 16 fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.dataset = f[0];
    r.signal_id = parse_num<std::size_t>(f[1], "signal_id");
    r.master_seed = parse_num<std::uint64_t>(f[2], "master_seed");
    r.run_seed = parse_num<std::uint64_t>(f[3], "run_seed");
    r.beta = parse_num<double>(f[4], "beta");
    r.adv_count = parse_num<std::size_t>(f[5], "adv_count");
    r.adv_fraction = parse_num<double>(f[6], "adv_fraction");
    r.placement_mode = f[7];
    if (!f[8].empty()) r.layer = parse_num<std::size_t>(f[8], "layer");
    r.direction = f[9];
    if (!f[10].empty()) r.m = parse_num<std::size_t>(f[10], "m");
    r.inefficiency = parse_num<double>(f[11], "inefficiency");
    r.discomfort_total = parse_num<double>(f[12], "discomfort_total");
    r.discomfort_legit = parse_num<double>(f[13], "discomfort_legit");
    r.compromised = parse_num<double>(f[14], "compromised");
    r.iterations = parse_num<std::size_t>(f[15], "iterations");
    return r;
}

namespace {

std::vector<ResultRow> parse_rows(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("dataset,", 0) != 0)
        throw Error(ErrorKind::Parse, name + ": missing result header");
    std::vector<ResultRow> rows;
    for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        try {
            rows.push_back(parse_row(line));
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

// Rows of an interrupted sweep. A final line without its newline was cut off mid-write and is dropped.
std::vector<ResultRow> read_rows_for_resume(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!text.empty() && text.back() != '\n') {
        const auto cut = text.rfind('\n');
        text.erase(cut == std::string::npos ? 0 : cut + 1);
        warn(file.string() + ": dropping incomplete final line");
    }
    if (text.empty()) return {};
    std::istringstream ss(text);
    return parse_rows(ss, file.string());
}

}  // namespace

std::vector<ResultRow> read_rows(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file.string());
    return parse_rows(in, file.string());
}

void sort_rows(std::vector<ResultRow>& rows) {
    auto key = [](const ResultRow& r) {
        return std::make_tuple(std::cref(r.dataset), r.signal_id, std::cref(r.placement_mode), r.layer.value_or(0),
                               std::cref(r.direction), r.m.value_or(0), r.beta, r.adv_count, r.run_seed);
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        auto ka = key(a), kb = key(b);
        if (ka != kb) return ka < kb;
        return format_row(a) < format_row(b);
    });
}

void write_sorted_rows(const fs::path& file, std::vector<ResultRow> rows) {
    sort_rows(rows);
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out << kResultHeader << '\n';
        for (const auto& r : rows) out << format_row(r) << '\n';
        if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
    fs::rename(tmp, file);
}

std::string cell_key(const ResultRow& r) {
    return r.dataset + '|' + std::to_string(r.signal_id) + '|' + r.placement_mode + '|' + fmt_real(r.beta) + '|' +
           std::to_string(r.adv_count) + '|' + (r.layer ? std::to_string(*r.layer) : "") + '|' + r.direction + '|' +
           (r.m ? std::to_string(*r.m) : "");
}

SweepGrid aggregate_rows(const std::vector<ResultRow>& input) {
    std::vector<ResultRow> rows = input;
    sort_rows(rows);
    SweepGrid grid;
    for (std::size_t i = 0; i < rows.size();) {
        const std::string key = cell_key(rows[i]);
        std::size_t j = i;
        MetricPoint mp;
        mp.beta = rows[i].beta;
        mp.adversary_fraction = rows[i].adv_fraction;
        for (; j < rows.size() && cell_key(rows[j]) == key; ++j) {
            mp.inefficiency += rows[j].inefficiency;
            mp.discomfort_total += rows[j].discomfort_total;
            mp.discomfort_legitimate += rows[j].discomfort_legit;
            mp.compromised += rows[j].compromised;
            ++mp.run_count;
        }
        const double n = static_cast<double>(mp.run_count);
        mp.inefficiency /= n;
        mp.discomfort_total /= n;
        mp.discomfort_legitimate /= n;
        mp.compromised /= n;

        const ResultRow& r = rows[i];
        if (r.placement_mode == "random") {
            grid.cells.push_back({r.dataset, r.signal_id, r.adv_count, mp});
        } else {
            grid.structural.push_back(
                {r.dataset, r.signal_id, r.placement_mode, r.layer.value_or(0), r.direction, r.m.value_or(0), r.adv_count, mp});
        }
        i = j;
    }
    return grid;
}

std::uint64_t layer_configuration_count(std::size_t n, std::size_t cap) {
    std::uint64_t total = 0;
    for (std::size_t size : binary_layer_sizes(n))
        for (std::size_t k : distinct_layer_counts(size)) total += std::min<std::uint64_t>(cap, binomial(size, k));
    return total;
}

namespace {

std::vector<std::size_t> scales_for(const SweepConfig& cfg, std::size_t n) {
    if (cfg.scales.empty()) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i + 1;
        return all;
    }
    for (auto s : cfg.scales)
        if (s > n)
            throw Error(ErrorKind::Configuration, "scale " + std::to_string(s) + " exceeds population of " +
                                                      std::to_string(n));
    return cfg.scales;
}

}  // namespace

std::uint64_t estimate_experiment_count(const SweepConfig& cfg, const std::vector<SweepMode>& modes) {
    auto has = [&](SweepMode m) { return std::find(modes.begin(), modes.end(), m) != modes.end(); };
    const std::uint64_t per_grid = static_cast<std::uint64_t>(cfg.severities.size()) * signal_count(cfg);
    std::uint64_t total = 0;
    for (std::size_t n : population_sizes(cfg)) {
        std::uint64_t inner = 0;
        if (has(SweepMode::Scale)) inner += static_cast<std::uint64_t>(cfg.runs_per_cell) * scales_for(cfg, n).size();
        if (has(SweepMode::LayerWise)) inner += layer_configuration_count(n, cfg.combination_cap);
        if (has(SweepMode::Cumulative)) inner += 2 * static_cast<std::uint64_t>(n);
        total += per_grid * inner;
    }
    return total;
}

std::uint64_t estimate_experiment_count(const SweepConfig& cfg) { return estimate_experiment_count(cfg, cfg.modes); }

std::uint64_t gaussian_experiment_count(const std::vector<std::size_t>& agents, std::size_t plan_grid_size,
                                        std::size_t severities, std::size_t permutations) {
    std::uint64_t total = 0;
    for (auto n : agents) total += static_cast<std::uint64_t>(n) * severities * plan_grid_size * permutations;
    return total;
}

namespace {

using DiscomfortVec = std::vector<double>;

/// Computes each baseline once, on first request, from whichever thread asks first.
class BaselineCache {
public:
    template <typename Fn>
    std::shared_ptr<const DiscomfortVec> get(const std::string& key, Fn&& compute) {
        std::shared_future<std::shared_ptr<const DiscomfortVec>> fut;
        std::promise<std::shared_ptr<const DiscomfortVec>> promise;
        bool owner = false;
        {
            std::lock_guard lock(mutex_);
            auto it = entries_.find(key);
            if (it == entries_.end()) {
                fut = promise.get_future().share();
                entries_.emplace(key, fut);
                owner = true;
            } else {
                fut = it->second;
            }
        }
        if (owner) {
            try {
                promise.set_value(std::make_shared<const DiscomfortVec>(compute()));
            } catch (...) {
                promise.set_exception(std::current_exception());
            }
        }
        return fut.get();
    }

private:
    std::mutex mutex_;
    std::map<std::string, std::shared_future<std::shared_ptr<const DiscomfortVec>>> entries_;
};

struct Unit {
    SweepMode mode = SweepMode::Scale;
    std::size_t pop = 0;
    std::size_t signal = 0;
    double beta = 0.0;
    std::size_t adv_count = 0;
    std::size_t layer = 0;
    Direction direction = Direction::TopDown;
    std::size_t expected_rows = 0;
    std::string key;
};

struct Context {
    const SweepConfig& cfg;
    std::vector<Population> populations;
    std::vector<InefficiencyFn> signals;
    BaselineCache baselines;
    std::mutex topo_mutex;
    std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const TreeTopology>> structural_topologies;

    explicit Context(const SweepConfig& c) : cfg(c), populations(load_populations(c)), signals(load_signals(c)) {
        const std::size_t d = populations.front().plan_sets.front().dim();
        for (const auto& fn : signals)
            if (fn.target() && fn.target()->values.size() != d)
                throw Error(ErrorKind::Configuration, "target signal length " +
                                                          std::to_string(fn.target()->values.size()) +
                                                          " != plan dimension " + std::to_string(d));
    }

    std::uint64_t scale_seed(std::size_t pop, std::size_t signal, std::size_t r) const {
        return derive_seed(cfg.master_seed, {kScaleTag, fnv1a(populations[pop].name), signal, r});
    }
    std::uint64_t structural_seed(std::size_t pop, std::size_t signal) const {
        return derive_seed(cfg.master_seed, {kStructuralTag, fnv1a(populations[pop].name), signal});
    }

    std::shared_ptr<const TreeTopology> structural_topology(std::size_t pop, std::size_t signal) {
        std::lock_guard lock(topo_mutex);
        auto& slot = structural_topologies[{pop, signal}];
        if (!slot)
            slot = std::make_shared<const TreeTopology>(
                build_balanced_binary(populations[pop].agents(), structural_seed(pop, signal)));
        return slot;
    }

    std::shared_ptr<const DiscomfortVec> baseline(const std::string& key, const TreeTopology& t, std::size_t pop,
                                                  std::size_t signal, std::uint64_t seed) {
        return baselines.get(key, [&] {
            return run_baseline(t, populations[pop].plan_sets, make_run_config(cfg, signals[signal], seed))
                .discomfort_per_agent;
        });
    }
};

ResultRow make_row(const Context& ctx, const Unit& u, std::uint64_t run_seed, const RunOutcome& outcome,
                   const BehaviorProfile& profile, const DiscomfortVec& baseline) {
    const std::size_t n = outcome.selections.size();
    const auto legit = profile.legitimate_agents();
    ResultRow r;
    r.dataset = ctx.populations[u.pop].name;
    r.signal_id = u.signal;
    r.master_seed = ctx.cfg.master_seed;
    r.run_seed = run_seed;
    r.beta = u.beta;
    r.adv_count = u.adv_count;
    r.adv_fraction = static_cast<double>(u.adv_count) / static_cast<double>(n);
    r.inefficiency = outcome.global_inefficiency;
    r.discomfort_total = outcome.mean_discomfort();
    r.discomfort_legit = mean_discomfort_of(outcome, legit);
    r.compromised = compromised_discomfort(outcome.discomfort_per_agent, baseline, legit);
    r.iterations = outcome.iterations_used;
    switch (u.mode) {
        case SweepMode::Scale: r.placement_mode = "random"; break;
        case SweepMode::LayerWise:
            r.placement_mode = "layer";
            r.layer = u.layer;
            break;
        case SweepMode::Cumulative:
            r.placement_mode = "cumulative";
            r.direction = to_string(u.direction);
            r.m = u.adv_count;
            break;
    }
    return r;
}

std::vector<ResultRow> execute_unit(Context& ctx, const Unit& u) {
    const auto& plans = ctx.populations[u.pop].plan_sets;
    const std::size_t n = plans.size();
    std::vector<ResultRow> rows;

    if (u.mode == SweepMode::Scale) {
        for (std::size_t r = 0; r < ctx.cfg.runs_per_cell; ++r) {
            const std::uint64_t seed = ctx.scale_seed(u.pop, u.signal, r);
            const TreeTopology t = build_balanced_binary(n, seed);
            auto base = ctx.baseline("scale|" + std::to_string(u.pop) + "|" + std::to_string(u.signal) + "|" +
                                         std::to_string(r),
                                     t, u.pop, u.signal, seed);
            const auto adversaries = random_adversaries(n, u.adv_count, derive_seed(seed, {kPlacementTag}));
            const auto profile = make_profile(t, adversaries, u.beta);
            const auto outcome = run(t, plans, profile, make_run_config(ctx.cfg, ctx.signals[u.signal], seed));
            rows.push_back(make_row(ctx, u, seed, outcome, profile, *base));
        }
        return rows;
    }

    const auto topology = ctx.structural_topology(u.pop, u.signal);
    const std::uint64_t sseed = ctx.structural_seed(u.pop, u.signal);
    auto base = ctx.baseline("structural|" + std::to_string(u.pop) + "|" + std::to_string(u.signal), *topology, u.pop,
                             u.signal, sseed);

    if (u.mode == SweepMode::LayerWise) {
        const auto configs = enumerate_layer_subsets(*topology, u.layer, u.adv_count, ctx.cfg.combination_cap,
                                                     derive_seed(sseed, {kLayerTag, u.layer, u.adv_count}));
        for (std::size_t c = 0; c < configs.size(); ++c) {
            const std::uint64_t seed = derive_seed(sseed, {kLayerTag, u.layer, u.adv_count, c});
            const auto profile = make_profile(*topology, configs[c], u.beta);
            const auto outcome = run(*topology, plans, profile, make_run_config(ctx.cfg, ctx.signals[u.signal], seed));
            rows.push_back(make_row(ctx, u, seed, outcome, profile, *base));
        }
        return rows;
    }

    const auto adversaries = cumulative_positions(*topology, u.direction, u.adv_count);
    const auto profile = make_profile(*topology, adversaries, u.beta);
    const auto outcome = run(*topology, plans, profile, make_run_config(ctx.cfg, ctx.signals[u.signal], sseed));
    rows.push_back(make_row(ctx, u, sseed, outcome, profile, *base));
    return rows;
}

std::vector<Unit> plan_units(Context& ctx, SweepMode mode) {
    std::vector<Unit> units;
    for (std::size_t pop = 0; pop < ctx.populations.size(); ++pop) {
        const std::size_t n = ctx.populations[pop].agents();
        for (std::size_t signal = 0; signal < ctx.signals.size(); ++signal) {
            for (double beta : ctx.cfg.severities) {
                Unit u;
                u.mode = mode;
                u.pop = pop;
                u.signal = signal;
                u.beta = beta;
                if (mode == SweepMode::Scale) {
                    for (std::size_t s : scales_for(ctx.cfg, n)) {
                        u.adv_count = s;
                        u.expected_rows = ctx.cfg.runs_per_cell;
                        units.push_back(u);
                    }
                } else if (mode == SweepMode::LayerWise) {
                    const auto sizes = binary_layer_sizes(n);
                    for (std::size_t layer = 1; layer <= sizes.size(); ++layer) {
                        for (std::size_t k : distinct_layer_counts(sizes[layer - 1])) {
                            u.layer = layer;
                            u.adv_count = k;
                            u.expected_rows = std::min<std::uint64_t>(ctx.cfg.combination_cap,
                                                                      binomial(sizes[layer - 1], k));
                            units.push_back(u);
                        }
                    }
                } else {
                    for (Direction dir : {Direction::TopDown, Direction::BottomUp}) {
                        for (std::size_t m = 1; m <= n; ++m) {
                            u.direction = dir;
                            u.adv_count = m;
                            u.expected_rows = 1;
                            units.push_back(u);
                        }
                    }
                }
            }
        }
    }
    // Key each unit the same way its rows will be keyed.
    for (auto& u : units) {
        ResultRow proto;
        proto.dataset = ctx.populations[u.pop].name;
        proto.signal_id = u.signal;
        proto.beta = u.beta;
        proto.adv_count = u.adv_count;
        if (u.mode == SweepMode::Scale) proto.placement_mode = "random";
        if (u.mode == SweepMode::LayerWise) {
            proto.placement_mode = "layer";
            proto.layer = u.layer;
        }
        if (u.mode == SweepMode::Cumulative) {
            proto.placement_mode = "cumulative";
            proto.direction = to_string(u.direction);
            proto.m = u.adv_count;
        }
        u.key = cell_key(proto);
    }
    return units;
}

SweepResult execute(const SweepConfig& cfg, const std::vector<SweepMode>& modes, const fs::path& csv_path,
                    const SweepOptions& options) {
    for (char c : cfg.dataset.name)
        if (c == ',' || c == '|' || c == '\n') throw Error(ErrorKind::Configuration, "dataset name has separator characters");
    Context ctx(cfg);
    std::vector<Unit> units;
    for (SweepMode m : modes) {
        auto part = plan_units(ctx, m);
        units.insert(units.end(), part.begin(), part.end());
    }

    std::vector<ResultRow> kept;
    std::set<std::string> done;
    if (options.resume && fs::exists(csv_path)) {
        std::map<std::string, std::size_t> counts;
        auto existing = read_rows_for_resume(csv_path);
        for (const auto& r : existing) ++counts[cell_key(r)];
        for (const auto& u : units)
            if (counts[u.key] == u.expected_rows) done.insert(u.key);
        for (auto& r : existing)
            if (done.count(cell_key(r))) kept.push_back(std::move(r));
    }

    if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
    std::ofstream sink;
    if (options.write_csv) {
        sink.open(csv_path, std::ios::binary | std::ios::trunc);
        if (!sink) throw Error(ErrorKind::Io, "cannot write " + csv_path.string());
        sink << kResultHeader << '\n';
        for (const auto& r : kept) sink << format_row(r) << '\n';
        sink.flush();
    }

    std::vector<const Unit*> pending;
    for (const auto& u : units)
        if (!done.count(u.key)) pending.push_back(&u);

    std::mutex sink_mutex;
    std::vector<ResultRow> produced;
    std::vector<std::pair<std::string, std::string>> errors;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < pending.size();) {
            const Unit& u = *pending[i];
            try {
                auto rows = execute_unit(ctx, u);
                std::lock_guard lock(sink_mutex);
                if (options.write_csv) {
                    for (const auto& r : rows) sink << format_row(r) << '\n';
                    sink.flush();
                }
                produced.insert(produced.end(), std::make_move_iterator(rows.begin()),
                                std::make_move_iterator(rows.end()));
            } catch (const std::exception& e) {
                std::lock_guard lock(sink_mutex);
                errors.emplace_back(u.key, e.what());
            }
        }
    };

    std::size_t threads = options.threads.value_or(cfg.threads);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(1, pending.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    sink.close();

    SweepResult result;
    result.csv_path = csv_path;
    result.rows = std::move(kept);
    result.rows.insert(result.rows.end(), std::make_move_iterator(produced.begin()),
                       std::make_move_iterator(produced.end()));
    sort_rows(result.rows);
    if (options.write_csv) write_sorted_rows(csv_path, result.rows);

    const fs::path error_path = csv_path.string() + ".errors.csv";
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end());
        std::ofstream err(error_path, std::ios::binary | std::ios::trunc);
        err << "cell,error\n";
        for (const auto& [key, msg] : errors) {
            err << key << ',' << msg << '\n';
            warn("cell " + key + " failed: " + msg);
        }
    } else if (options.write_csv && fs::exists(error_path)) {
        fs::remove(error_path);
    }
    result.failed_units = errors.size();
    result.grid = aggregate_rows(result.rows);
    return result;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, const SweepOptions& options) {
    validate(cfg);
    return execute(cfg, {SweepMode::Scale}, cfg.output_dir / "sweep.csv", options);
}

SweepResult run_structural(const SweepConfig& cfg, SweepMode mode, const SweepOptions& options) {
    validate(cfg);
    if (mode == SweepMode::Scale) throw Error(ErrorKind::Configuration, "structural mode must be layer-wise or cumulative");
    return execute(cfg, {mode}, cfg.output_dir / ("structural-" + to_string(mode) + ".csv"), options);
}

SingleRun run_single(const SweepConfig& cfg, const AttackSpec& attack, std::size_t run_index, std::size_t signal_id,
                     std::size_t population) {
    Context ctx(cfg);
    if (population >= ctx.populations.size()) throw Error(ErrorKind::Configuration, "population index out of range");
    if (signal_id >= ctx.signals.size()) throw Error(ErrorKind::Configuration, "signal index out of range");
    const auto& plans = ctx.populations[population].plan_sets;
    const std::size_t n = plans.size();

    Unit u;
    u.pop = population;
    u.signal = signal_id;
    u.beta = attack.severity;

    SingleRun out;
    std::uint64_t seed = 0;
    std::shared_ptr<const TreeTopology> topology;
    if (attack.placement == PlacementMode::Random) {
        u.mode = SweepMode::Scale;
        seed = ctx.scale_seed(population, signal_id, run_index);
        topology = std::make_shared<const TreeTopology>(build_balanced_binary(n, seed));
        out.adversaries = random_adversaries(n, attack.count, derive_seed(seed, {kPlacementTag}));
    } else {
        topology = ctx.structural_topology(population, signal_id);
        const std::uint64_t sseed = ctx.structural_seed(population, signal_id);
        seed = sseed;
        if (attack.placement == PlacementMode::Layer) {
            u.mode = SweepMode::LayerWise;
            u.layer = attack.layer;
            const std::size_t k = layer_adversary_count(topology->layer_size(attack.layer), attack.percent);
            const auto configs = enumerate_layer_subsets(*topology, attack.layer, k, cfg.combination_cap,
                                                         derive_seed(sseed, {kLayerTag, attack.layer, k}));
            if (attack.config_index >= configs.size())
                throw Error(ErrorKind::Range, "layer configuration index out of range");
            out.adversaries = configs[attack.config_index];
            seed = derive_seed(sseed, {kLayerTag, attack.layer, k, attack.config_index});
        } else {
            u.mode = SweepMode::Cumulative;
            u.direction = attack.placement == PlacementMode::CumulativeTopDown ? Direction::TopDown : Direction::BottomUp;
            out.adversaries = cumulative_positions(*topology, u.direction, attack.count);
        }
    }
    u.adv_count = out.adversaries.size();

    const auto base_seed = attack.placement == PlacementMode::Random ? seed : ctx.structural_seed(population, signal_id);
    out.baseline = run_baseline(*topology, plans, make_run_config(cfg, ctx.signals[signal_id], base_seed));
    const auto profile = make_profile(*topology, out.adversaries, attack.severity);
    out.outcome = run(*topology, plans, profile, make_run_config(cfg, ctx.signals[signal_id], seed));
    out.row = make_row(ctx, u, seed, out.outcome, profile, out.baseline.discomfort_per_agent);
    return out;
}

}  // namespace advopt
