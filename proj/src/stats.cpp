#include "tsgen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tsgen {

std::string effect_label_name(EffectLabel label) {
    switch (label) {
        case EffectLabel::none: return "none";
        case EffectLabel::small_effect: return "small";
        case EffectLabel::medium_effect: return "medium";
        default: return "large";
    }
}

EffectLabel classify_effect(double a12) {
    if (a12 > 0.71 || a12 < 0.29) {
        return EffectLabel::large_effect;
    }
    if (a12 > 0.64 || a12 < 0.36) {
        return EffectLabel::medium_effect;
    }
    if (a12 > 0.56 || a12 < 0.44) {
        return EffectLabel::small_effect;
    }
    return EffectLabel::none;
}

double vargha_delaney_a12(const SampleGroup& g1, const SampleGroup& g2) {
    if (g1.values.empty() || g2.values.empty()) {
        throw std::invalid_argument("vargha_delaney_a12: empty sample group");
    }
    double wins = 0.0;
    for (const double x : g1.values) {
        for (const double y : g2.values) {
            if (x > y) {
                wins += 1.0;
            } else if (x == y) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(g1.values.size()) * static_cast<double>(g2.values.size()));
}

namespace {

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a + 1)
// or continued fraction (otherwise).
double gamma_p(double a, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) {
                break;
            }
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) {
            break;
        }
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

struct RankedData {
    std::vector<double> ranks;        // midranks, pooled order matches values
    std::vector<std::size_t> labels;  // group index per observation
    double tie_correction = 1.0;      // 1 - sum(t^3 - t) / (N^3 - N)
};

RankedData rank_observations(std::span<const SampleGroup> groups) {
    RankedData data;
    std::vector<double> values;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (const double v : groups[g].values) {
            values.push_back(v);
            data.labels.push_back(g);
        }
    }
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    data.ranks.resize(n);
    double tie_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            data.ranks[order[k]] = midrank;
        }
        const double t = static_cast<double>(j - i + 1);
        tie_sum += t * t * t - t;
        i = j + 1;
    }
    const double nd = static_cast<double>(n);
    data.tie_correction = 1.0 - tie_sum / (nd * nd * nd - nd);
    return data;
}

double h_statistic(const RankedData& data, std::span<const SampleGroup> groups) {
    const double n = static_cast<double>(data.ranks.size());
    std::vector<double> rank_sums(groups.size(), 0.0);
    for (std::size_t i = 0; i < data.ranks.size(); ++i) {
        rank_sums[data.labels[i]] += data.ranks[i];
    }
    const double mean_rank = (n + 1.0) / 2.0;
    double h = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double ng = static_cast<double>(groups[g].values.size());
        const double mean_g = rank_sums[g] / ng;
        h += ng * (mean_g - mean_rank) * (mean_g - mean_rank);
    }
    return h * 12.0 / (n * (n + 1.0));
}

double exact_permutation_p(const RankedData& data, std::span<const SampleGroup> groups,
                           double h_observed) {
    // Permute group labels over the midranks; the enumeration covers each
    // distinct labeling once.
    std::vector<std::size_t> labels = data.labels;
    std::sort(labels.begin(), labels.end());
    const double n = static_cast<double>(data.ranks.size());
    const double mean_rank = (n + 1.0) / 2.0;
    std::uint64_t total = 0;
    std::uint64_t at_least = 0;
    const double eps = 1e-9;
    do {
        std::vector<double> rank_sums(groups.size(), 0.0);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            rank_sums[labels[i]] += data.ranks[i];
        }
        double h = 0.0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const double ng = static_cast<double>(groups[g].values.size());
            const double mean_g = rank_sums[g] / ng;
            h += ng * (mean_g - mean_rank) * (mean_g - mean_rank);
        }
        h *= 12.0 / (n * (n + 1.0));
        if (h >= h_observed - eps) {
            ++at_least;
        }
        ++total;
        if (total > 2000000) {
            throw std::invalid_argument("kruskal_wallis: exact p-value needs tiny samples");
        }
    } while (std::next_permutation(labels.begin(), labels.end()));
    return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace

double chi_square_sf(double x, double df) {
    if (x <= 0.0) {
        return 1.0;
    }
    return 1.0 - gamma_p(df / 2.0, x / 2.0);
}

KruskalWallisResult kruskal_wallis(std::span<const SampleGroup> groups, bool exact) {
    if (groups.size() < 2) {
        throw std::invalid_argument("kruskal_wallis: need at least two groups");
    }
    for (const SampleGroup& g : groups) {
        if (g.values.empty()) {
            throw std::invalid_argument("kruskal_wallis: empty sample group");
        }
    }
    const RankedData data = rank_observations(groups);
    if (data.tie_correction <= 0.0) {
        // Every observation identical: H is undefined after tie correction.
        return KruskalWallisResult{0.0, 1.0};
    }
    const double h = h_statistic(data, groups) / data.tie_correction;
    if (exact) {
        return KruskalWallisResult{h, exact_permutation_p(data, groups, h)};
    }
    return KruskalWallisResult{h, chi_square_sf(h, static_cast<double>(groups.size() - 1))};
}

ComparisonResult compare_groups(const std::string& metric, const SampleGroup& g1,
                                const SampleGroup& g2) {
    ComparisonResult result;
    result.metric = metric;
    result.a12 = vargha_delaney_a12(g1, g2);
    result.effect = classify_effect(result.a12);
    const SampleGroup groups[2] = {g1, g2};
    const KruskalWallisResult kw = kruskal_wallis(groups);
    result.kw_h = kw.h;
    result.p_value = kw.p_value;
    result.significant = result.p_value < 0.05;
    return result;
}

}  // namespace tsgen
