#include "advopt/costs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "advopt/error.hpp"

namespace advopt {

Scaling parse_scaling(const std::string& s) {
    if (s == "identity") return Scaling::Identity;
    if (s == "min-max") return Scaling::MinMax;
    if (s == "zero-mean-unit-norm") return Scaling::ZeroMeanUnitNorm;
    throw Error(ErrorKind::Configuration, "unknown scaling '" + s + "'");
}

InefficiencyKind parse_inefficiency_kind(const std::string& s) {
    if (s == "variance") return InefficiencyKind::Variance;
    if (s == "rss") return InefficiencyKind::Rss;
    throw Error(ErrorKind::Configuration, "unknown inefficiency kind '" + s + "'");
}

std::string to_string(Scaling s) {
    switch (s) {
        case Scaling::Identity: return "identity";
        case Scaling::MinMax: return "min-max";
        case Scaling::ZeroMeanUnitNorm: return "zero-mean-unit-norm";
    }
    return "identity";
}

std::string to_string(InefficiencyKind k) { return k == InefficiencyKind::Variance ? "variance" : "rss"; }

double variance_cost(std::span<const double> g) {
    if (g.empty()) throw Error(ErrorKind::InvalidInput, "variance of empty vector");
    const double n = static_cast<double>(g.size());
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : g) ss += (x - mean) * (x - mean);
    return ss / n;
}

std::vector<double> apply_scaling(std::span<const double> v, Scaling scaling) {
    std::vector<double> out(v.begin(), v.end());
    if (v.empty() || scaling == Scaling::Identity) return out;
    if (scaling == Scaling::MinMax) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        const double range = *hi - *lo;
        for (auto& x : out) x = range > 0 ? (x - *lo) / range : 0.0;
        return out;
    }
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double norm = 0.0;
    for (auto& x : out) {
        x -= mean;
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : out) x = norm > 0 ? x / norm : 0.0;
    return out;
}

namespace {

double rss_scaled(std::span<const double> g, std::span<const double> scaled_target, Scaling scaling) {
    double sum = 0.0;
    if (scaling == Scaling::Identity) {
        for (std::size_t j = 0; j < g.size(); ++j) sum += (g[j] - scaled_target[j]) * (g[j] - scaled_target[j]);
        return sum;
    }
    auto sg = apply_scaling(g, scaling);
    for (std::size_t j = 0; j < g.size(); ++j) sum += (sg[j] - scaled_target[j]) * (sg[j] - scaled_target[j]);
    return sum;
}

}  // namespace

double rss_cost(std::span<const double> g, std::span<const double> target, Scaling scaling) {
    if (g.size() != target.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "response length " + std::to_string(g.size()) + " != target length " + std::to_string(target.size()));
    auto st = apply_scaling(target, scaling);
    return rss_scaled(g, st, scaling);
}

double aggregate_discomfort(std::span<const double> discomforts) {
    if (discomforts.empty()) throw Error(ErrorKind::InvalidInput, "no discomfort values to aggregate");
    return std::accumulate(discomforts.begin(), discomforts.end(), 0.0) / static_cast<double>(discomforts.size());
}

InefficiencyFn InefficiencyFn::variance() { return InefficiencyFn{}; }

InefficiencyFn InefficiencyFn::rss(TargetSignal target, Scaling scaling) {
    if (target.values.empty()) throw Error(ErrorKind::InvalidInput, "rss needs a non-empty target");
    InefficiencyFn f;
    f.kind_ = InefficiencyKind::Rss;
    f.scaling_ = scaling;
    f.scaled_target_ = apply_scaling(target.values, scaling);
    f.target_ = std::move(target);
    return f;
}

double InefficiencyFn::operator()(std::span<const double> g) const {
    if (kind_ == InefficiencyKind::Variance) return variance_cost(g);
    if (g.size() != scaled_target_.size())
        throw Error(ErrorKind::DimensionMismatch, "response length " + std::to_string(g.size()) +
                                                      " != target length " + std::to_string(scaled_target_.size()));
    return rss_scaled(g, scaled_target_, scaling_);
}

}  // namespace advopt
