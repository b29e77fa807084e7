#pragma once

#include <span>
#include <string>
#include <vector>

namespace tsgen {

struct SampleGroup {
    std::string label;
    std::vector<double> values;  // one observation per repetition
};

enum class EffectLabel { none, small_effect, medium_effect, large_effect };

std::string effect_label_name(EffectLabel label);

/// Two-sided effect label from the one-sided thresholds 0.56 / 0.64 / 0.71
/// mirrored below 0.5 (strictly greater / strictly less).
EffectLabel classify_effect(double a12);

/// Vargha-Delaney probability of superiority of g1 over g2:
/// (#{x > y} + 0.5 * #{x = y}) / (|g1| * |g2|) over all cross pairs.
/// Throws std::invalid_argument on an empty group.
double vargha_delaney_a12(const SampleGroup& g1, const SampleGroup& g2);

struct KruskalWallisResult {
    double h = 0.0;
    double p_value = 1.0;
};

/// Kruskal-Wallis rank test with midrank ties and the standard tie
/// correction. All-identical observations yield H = 0, p = 1. The p-value
/// uses the chi-square approximation with (groups - 1) degrees of freedom;
/// `exact` switches to an exact permutation p-value (tiny samples only).
KruskalWallisResult kruskal_wallis(std::span<const SampleGroup> groups, bool exact = false);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double x, double df);

struct ComparisonResult {
    std::string metric;
    double a12 = 0.5;
    EffectLabel effect = EffectLabel::none;
    double kw_h = 0.0;
    double p_value = 1.0;
    bool significant = false;  // p < 0.05
};

/// Full pairwise comparison of two groups for one metric.
ComparisonResult compare_groups(const std::string& metric, const SampleGroup& g1,
                                const SampleGroup& g2);

}  // namespace tsgen
