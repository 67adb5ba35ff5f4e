#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "advopt/plans.hpp"

namespace advopt {

using GlobalResponse = std::vector<double>;

enum class Scaling { Identity, MinMax, ZeroMeanUnitNorm };
enum class InefficiencyKind { Variance, Rss };

Scaling parse_scaling(const std::string& s);
InefficiencyKind parse_inefficiency_kind(const std::string& s);
std::string to_string(Scaling s);
std::string to_string(InefficiencyKind k);

/// Population variance, divisor d.
double variance_cost(std::span<const double> g);

/// Residual sum of squares between s(g) and s(target).
double rss_cost(std::span<const double> g, std::span<const double> target, Scaling scaling);

/// Arithmetic mean.
double aggregate_discomfort(std::span<const double> discomforts);

std::vector<double> apply_scaling(std::span<const double> v, Scaling scaling);

/// System-level inefficiency f_I. For rss the scaled target is cached at construction.
class InefficiencyFn {
public:
    static InefficiencyFn variance();
    static InefficiencyFn rss(TargetSignal target, Scaling scaling = Scaling::Identity);

    InefficiencyKind kind() const noexcept { return kind_; }
    Scaling scaling() const noexcept { return scaling_; }
    const std::optional<TargetSignal>& target() const noexcept { return target_; }

    double operator()(std::span<const double> g) const;

private:
    InefficiencyKind kind_ = InefficiencyKind::Variance;
    Scaling scaling_ = Scaling::Identity;
    std::optional<TargetSignal> target_;
    std::vector<double> scaled_target_;
};

}  // namespace advopt
