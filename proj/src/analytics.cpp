#include "advopt/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "advopt/error.hpp"
#include "advopt/log.hpp"

namespace advopt {

std::string to_string(RvcLabel label) {
    switch (label) {
        case RvcLabel::Resilience: return "Resilience";
        case RvcLabel::Vulnerability: return "Vulnerability";
        case RvcLabel::Collapse: return "Collapse";
    }
    return "Resilience";
}

char short_label(RvcLabel label) { return to_string(label).front(); }

double mean_discomfort_of(const RunOutcome& outcome, std::span<const AgentId> agents) {
    if (agents.empty()) return 0.0;
    double sum = 0.0;
    for (AgentId a : agents) {
        if (a >= outcome.discomfort_per_agent.size())
            throw Error(ErrorKind::InvalidInput, "agent " + std::to_string(a) + " not in outcome");
        sum += outcome.discomfort_per_agent[a];
    }
    return sum / static_cast<double>(agents.size());
}

double compromised_discomfort(std::span<const double> with_adv, std::span<const double> baseline,
                              std::span<const AgentId> legitimate) {
    if (with_adv.size() != baseline.size())
        throw Error(ErrorKind::InvalidInput, "runs cover different agent populations");
    if (legitimate.empty()) return 0.0;
    double diff = 0.0;
    for (AgentId a : legitimate) {
        if (a >= with_adv.size()) throw Error(ErrorKind::InvalidInput, "agent " + std::to_string(a) + " not in outcome");
        diff += with_adv[a] - baseline[a];
    }
    return diff / static_cast<double>(legitimate.size());
}

double compromised_discomfort(const RunOutcome& with_adv, const RunOutcome& baseline,
                              std::span<const AgentId> legitimate) {
    if (with_adv.discomfort_per_agent.size() != baseline.discomfort_per_agent.size())
        throw Error(ErrorKind::InvalidInput, "runs cover different agent populations");
    if (legitimate.empty()) {
        warn("compromised discomfort with no legitimate agents; reporting 0");
        return 0.0;
    }
    return mean_discomfort_of(with_adv, legitimate) - mean_discomfort_of(baseline, legitimate);
}

std::vector<Point2> pareto_front(std::span<const Point2> points) {
    if (points.empty()) throw Error(ErrorKind::InvalidInput, "pareto front of no points");
    std::vector<Point2> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), [](const Point2& a, const Point2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<Point2> front;
    double best_y = std::numeric_limits<double>::infinity();
    for (const auto& p : sorted) {
        if (p.y < best_y) {
            front.push_back(p);
            best_y = p.y;
        }
    }
    return front;
}

std::size_t knee_index(std::span<const Point2> front) {
    if (front.empty()) throw Error(ErrorKind::InvalidInput, "knee of an empty front");
    auto [xlo, xhi] = std::minmax_element(front.begin(), front.end(), [](auto& a, auto& b) { return a.x < b.x; });
    auto [ylo, yhi] = std::minmax_element(front.begin(), front.end(), [](auto& a, auto& b) { return a.y < b.y; });
    const double xmin = xlo->x, xrange = xhi->x - xlo->x;
    const double ymin = ylo->y, yrange = yhi->y - ylo->y;

    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double nx = xrange > 0 ? (front[i].x - xmin) / xrange : 0.0;
        const double ny = yrange > 0 ? (front[i].y - ymin) / yrange : 0.0;
        const double dist = nx + ny;
        // Relative slack so that rescaled fronts resolve ties the same way.
        if (i == 0) {
            best_dist = dist;
            continue;
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(best_dist));
        if (dist < best_dist - slack || (std::abs(dist - best_dist) <= slack && front[i].x < front[best].x)) {
            best = i;
            best_dist = std::min(dist, best_dist);
        }
    }
    return best;
}

Point2 knee_mmd(std::span<const Point2> front) { return front[knee_index(front)]; }

std::size_t histogram_bin(double value, double min, double max, std::size_t bins) {
    if (!(max > min)) return 0;
    const double t = (value - min) / (max - min) * static_cast<double>(bins);
    const double idx = std::ceil(t) - 1.0;
    if (idx <= 0) return 0;
    return std::min(bins - 1, static_cast<std::size_t>(idx));
}

double bin_edge(std::size_t cut_after_bin, double min, double max, std::size_t bins) {
    return min + (max - min) * static_cast<double>(cut_after_bin + 1) / static_cast<double>(bins);
}

std::vector<double> multi_otsu(std::span<const double> values, std::size_t classes, std::size_t bins) {
    if (classes < 2) throw Error(ErrorKind::InvalidInput, "multi-Otsu needs at least 2 classes");
    if (bins < classes) throw Error(ErrorKind::InvalidInput, "fewer bins than classes");
    if (values.empty()) throw Error(ErrorKind::DegenerateInput, "no values");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double min = *lo, max = *hi;

    std::vector<double> count(bins, 0.0), mass(bins, 0.0);
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite value");
        const std::size_t b = histogram_bin(v, min, max, bins);
        count[b] += 1.0;
    }
    const std::size_t occupied = static_cast<std::size_t>(std::count_if(count.begin(), count.end(), [](double c) {
        return c > 0;
    }));
    if (occupied < classes)
        throw Error(ErrorKind::DegenerateInput, "only " + std::to_string(occupied) + " distinct histogram levels for " +
                                                    std::to_string(classes) + " classes");
    const double width = (max - min) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) mass[b] = count[b] * (min + (static_cast<double>(b) + 0.5) * width);

    // Prefix sums; class (a, b] has weight W[b+1]-W[a+1].
    std::vector<double> W(bins + 1, 0.0), M(bins + 1, 0.0);
    for (std::size_t b = 0; b < bins; ++b) {
        W[b + 1] = W[b] + count[b];
        M[b + 1] = M[b] + mass[b];
    }
    const std::size_t cuts = classes - 1;

    // Score of a cut tuple: sum over classes of M_c^2 / W_c; -inf if a class is empty.
    auto score = [&](const std::vector<std::size_t>& c) {
        double s = 0.0;
        std::size_t begin = 0;
        for (std::size_t j = 0; j <= cuts; ++j) {
            const std::size_t end = j < cuts ? c[j] + 1 : bins;
            const double w = W[end] - W[begin];
            if (w <= 0) return -std::numeric_limits<double>::infinity();
            const double m = M[end] - M[begin];
            s += m * m / w;
            begin = end;
        }
        return s;
    };

    auto for_each_tuple = [&](const std::function<void(const std::vector<std::size_t>&)>& fn) {
        std::vector<std::size_t> c(cuts);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t first) {
            if (j == cuts) {
                fn(c);
                return;
            }
            // Leave room for the remaining cuts; the last bin always belongs to the top class.
            for (std::size_t b = first; b + (cuts - j) < bins; ++b) {
                c[j] = b;
                rec(j + 1, b + 1);
            }
        };
        rec(0, 0);
    };

    double best = -std::numeric_limits<double>::infinity();
    for_each_tuple([&](const auto& c) { best = std::max(best, score(c)); });
    const double tol = 1e-9 * std::max(1.0, std::abs(best));

    std::vector<std::size_t> first_tied, lo_cut(cuts, bins), hi_cut(cuts, 0);
    for_each_tuple([&](const auto& c) {
        if (score(c) < best - tol) return;
        if (first_tied.empty()) first_tied = c;
        for (std::size_t j = 0; j < cuts; ++j) {
            lo_cut[j] = std::min(lo_cut[j], c[j]);
            hi_cut[j] = std::max(hi_cut[j], c[j]);
        }
    });
    std::vector<std::size_t> chosen(cuts);
    for (std::size_t j = 0; j < cuts; ++j) chosen[j] = (lo_cut[j] + hi_cut[j]) / 2;
    bool increasing = true;
    for (std::size_t j = 1; j < cuts; ++j) increasing = increasing && chosen[j] > chosen[j - 1];
    if (!increasing || score(chosen) < best - tol) chosen = first_tied;

    std::vector<double> thresholds;
    for (std::size_t c : chosen) thresholds.push_back(bin_edge(c, min, max, bins));
    return thresholds;
}

RvcLabel classify_rvc(double value, double t1, double t2, Orientation orientation) {
    if (!(t1 < t2)) throw Error(ErrorKind::InvalidThreshold, "thresholds must satisfy t1 < t2");
    const int band = value <= t1 ? 0 : (value <= t2 ? 1 : 2);
    const int label = orientation == Orientation::LowIsResilient ? band : 2 - band;
    return static_cast<RvcLabel>(label);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidInput, "spearman needs paired samples");
    auto rx = average_ranks(x), ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace advopt
