#include "advopt/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "advopt/error.hpp"
#include "advopt/log.hpp"

namespace fs = std::filesystem;

namespace advopt {

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Inefficiency: return "inefficiency";
        case Metric::Discomfort: return "discomfort";
        case Metric::Compromised: return "compromised";
    }
    return "inefficiency";
}

double metric_value(const MetricPoint& p, Metric m) {
    switch (m) {
        case Metric::Inefficiency: return p.inefficiency;
        case Metric::Discomfort: return p.discomfort_total;
        case Metric::Compromised: return p.compromised;
    }
    return 0.0;
}

namespace {

std::string real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string orientation_name(Orientation o) { return o == Orientation::LowIsResilient ? "low-is-resilient" : "high-is-resilient"; }

void add_knee(GroupAnalysis& g, const std::string& axis, double fixed, const std::vector<std::size_t>& members) {
    if (members.empty()) return;
    std::vector<Point2> points;
    for (auto i : members)
        points.push_back({g.cells[i].metrics.inefficiency, g.cells[i].metrics.discomfort_total});
    KneeRecord rec;
    rec.axis = axis;
    rec.fixed_value = fixed;
    rec.front = pareto_front(points);
    rec.knee = knee_mmd(rec.front);
    for (std::size_t j = 0; j < members.size(); ++j)
        if (points[j] == rec.knee) {
            rec.knee_cell = members[j];
            break;
        }
    g.knees.push_back(std::move(rec));
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + p.string());
    return out;
}

std::string group_stem(const GroupAnalysis& g) { return g.dataset + "-s" + std::to_string(g.signal_id); }

}  // namespace

AnalysisBundle analyze(const SweepGrid& grid, const AnalyzeOptions& options) {
    AnalysisBundle bundle;
    bundle.structural = grid.structural;

    std::map<std::pair<std::string, std::size_t>, std::vector<GridCell>> groups;
    for (const auto& c : grid.cells) groups[{c.dataset, c.signal_id}].push_back(c);

    for (auto& [key, cells] : groups) {
        GroupAnalysis g;
        g.dataset = key.first;
        g.signal_id = key.second;
        std::sort(cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) {
            return std::tie(a.metrics.beta, a.adv_count) < std::tie(b.metrics.beta, b.adv_count);
        });
        g.cells = cells;
        g.labels.assign(g.cells.size(), {RvcLabel::Resilience, RvcLabel::Resilience, RvcLabel::Resilience});

        for (std::size_t mi = 0; mi < kMetrics.size(); ++mi) {
            Segmentation seg;
            seg.metric = kMetrics[mi];
            seg.orientation = options.orientation[mi];
            std::vector<double> values;
            for (const auto& c : g.cells) values.push_back(metric_value(c.metrics, seg.metric));
            try {
                auto t = multi_otsu(values, options.classes, options.bins);
                seg.thresholds = std::make_pair(t.front(), t.back());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateInput) throw;
                warn(g.dataset + " signal " + std::to_string(g.signal_id) + ": " + to_string(seg.metric) +
                     " is degenerate; every cell labeled Resilience");
            }
            if (seg.thresholds)
                for (std::size_t i = 0; i < g.cells.size(); ++i)
                    g.labels[i][mi] = classify_rvc(values[i], seg.thresholds->first, seg.thresholds->second,
                                                   seg.orientation);
            g.segmentation[mi] = seg;
        }

        std::map<double, std::vector<std::size_t>> by_beta;
        std::map<std::size_t, std::vector<std::size_t>> by_scale;
        for (std::size_t i = 0; i < g.cells.size(); ++i) {
            by_beta[g.cells[i].metrics.beta].push_back(i);
            by_scale[g.cells[i].adv_count].push_back(i);
        }
        for (const auto& [beta, members] : by_beta) add_knee(g, "beta-row", beta, members);
        for (const auto& [scale, members] : by_scale) add_knee(g, "scale-column", static_cast<double>(scale), members);
        bundle.groups.push_back(std::move(g));
    }
    return bundle;
}

HeatmapData make_heatmap(const GroupAnalysis& g, Metric metric, const PlotOptions& options) {
    HeatmapData h;
    h.title = g.dataset + " signal " + std::to_string(g.signal_id) + ": " + to_string(metric);
    std::set<double> betas;
    std::map<std::size_t, double> fractions;
    for (const auto& c : g.cells) {
        if (options.exclude_beta_one && c.metrics.beta == 1.0) continue;
        betas.insert(c.metrics.beta);
        fractions[c.adv_count] = c.metrics.adversary_fraction;
    }
    h.row_values.assign(betas.begin(), betas.end());
    std::vector<std::size_t> counts;
    for (const auto& [count, frac] : fractions) {
        counts.push_back(count);
        h.column_values.push_back(frac);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    h.values.assign(h.row_values.size(), std::vector<double>(counts.size(), nan));
    h.labels.assign(h.row_values.size(), std::vector<std::optional<RvcLabel>>(counts.size()));

    const auto mi = static_cast<std::size_t>(std::find(kMetrics.begin(), kMetrics.end(), metric) - kMetrics.begin());
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> where;  // cell index -> (row, col)
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        const auto& c = g.cells[i];
        auto rit = std::find(h.row_values.begin(), h.row_values.end(), c.metrics.beta);
        if (rit == h.row_values.end()) continue;
        const std::size_t r = static_cast<std::size_t>(rit - h.row_values.begin());
        const std::size_t col =
            static_cast<std::size_t>(std::find(counts.begin(), counts.end(), c.adv_count) - counts.begin());
        h.values[r][col] = metric_value(c.metrics, metric);
        if (g.segmentation[mi].thresholds) h.labels[r][col] = g.labels[i][mi];
        where[i] = {r, col};
    }
    for (const auto& k : g.knees) {
        auto it = where.find(k.knee_cell);
        if (it == where.end()) continue;
        (k.axis == "beta-row" ? h.row_knees : h.column_knees).push_back(it->second);
    }
    return h;
}

void write_heatmaps(const AnalysisBundle& bundle, const fs::path& out_dir, const PlotOptions& plot) {
    fs::create_directories(out_dir);
    for (const auto& g : bundle.groups)
        for (Metric m : kMetrics) {
            const auto h = make_heatmap(g, m, plot);
            const std::string stem = group_stem(g) + "-" + to_string(m);
            open_out(out_dir / (stem + ".svg")) << render_heatmap_svg(h);
            open_out(out_dir / (stem + ".matrix.csv")) << render_heatmap_csv(h);
        }
}

void write_analysis(const AnalysisBundle& bundle, const fs::path& out_dir, const PlotOptions& plot) {
    fs::create_directories(out_dir);

    auto cells = open_out(out_dir / "cells.csv");
    cells << "dataset,signal_id,beta,adv_count,adv_fraction,inefficiency,discomfort_total,discomfort_legit,compromised,"
             "runs,zone_inefficiency,zone_discomfort,zone_compromised\n";
    auto thresholds = open_out(out_dir / "thresholds.csv");
    thresholds << "dataset,signal_id,metric,orientation,t1,t2\n";
    auto knees = open_out(out_dir / "knees.csv");
    knees << "dataset,signal_id,axis,fixed_value,front_size,knee_beta,knee_adv_count,knee_inefficiency,knee_discomfort\n";
    auto fronts = open_out(out_dir / "fronts.csv");
    fronts << "dataset,signal_id,axis,fixed_value,inefficiency,discomfort\n";

    for (const auto& g : bundle.groups) {
        for (std::size_t i = 0; i < g.cells.size(); ++i) {
            const auto& c = g.cells[i];
            cells << g.dataset << ',' << g.signal_id << ',' << real(c.metrics.beta) << ',' << c.adv_count << ','
                  << real(c.metrics.adversary_fraction) << ',' << real(c.metrics.inefficiency) << ','
                  << real(c.metrics.discomfort_total) << ',' << real(c.metrics.discomfort_legitimate) << ','
                  << real(c.metrics.compromised) << ',' << c.metrics.run_count;
            for (std::size_t mi = 0; mi < 3; ++mi) cells << ',' << to_string(g.labels[i][mi]);
            cells << '\n';
        }
        for (const auto& seg : g.segmentation) {
            thresholds << g.dataset << ',' << g.signal_id << ',' << to_string(seg.metric) << ','
                       << orientation_name(seg.orientation) << ',';
            if (seg.thresholds) thresholds << real(seg.thresholds->first) << ',' << real(seg.thresholds->second);
            else thresholds << ',';
            thresholds << '\n';
        }
        for (const auto& k : g.knees) {
            const auto& kc = g.cells[k.knee_cell];
            knees << g.dataset << ',' << g.signal_id << ',' << k.axis << ',' << real(k.fixed_value) << ','
                  << k.front.size() << ',' << real(kc.metrics.beta) << ',' << kc.adv_count << ',' << real(k.knee.x)
                  << ',' << real(k.knee.y) << '\n';
            for (const auto& p : k.front)
                fronts << g.dataset << ',' << g.signal_id << ',' << k.axis << ',' << real(k.fixed_value) << ','
                       << real(p.x) << ',' << real(p.y) << '\n';
        }
    }

    if (!bundle.structural.empty()) {
        auto s = open_out(out_dir / "structural.csv");
        s << "dataset,signal_id,mode,layer,direction,m,adv_count,beta,adv_fraction,inefficiency,discomfort_total,"
             "discomfort_legit,compromised,runs\n";
        for (const auto& c : bundle.structural) {
            s << c.dataset << ',' << c.signal_id << ',' << c.mode << ',' << (c.mode == "layer" ? std::to_string(c.layer) : "")
              << ',' << c.direction << ',' << (c.mode == "cumulative" ? std::to_string(c.m) : "") << ',' << c.adv_count
              << ',' << real(c.metrics.beta) << ',' << real(c.metrics.adversary_fraction) << ','
              << real(c.metrics.inefficiency) << ',' << real(c.metrics.discomfort_total) << ','
              << real(c.metrics.discomfort_legitimate) << ',' << real(c.metrics.compromised) << ','
              << c.metrics.run_count << '\n';
        }
    }

    write_heatmaps(bundle, out_dir, plot);
}

}  // namespace advopt
