#include "tsgen/stats.hpp"

#include "oracles/reference_stats.hpp"
#include "tsgen/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace tsgen;

namespace {

SampleGroup group(std::vector<double> values) { return SampleGroup{"g", std::move(values)}; }

}  // namespace

TEST_CASE("A12 examples") {
    CHECK(vargha_delaney_a12(group({5, 6, 7}), group({1, 2, 3})) == doctest::Approx(1.0));
    CHECK(vargha_delaney_a12(group({1, 2, 3}), group({3, 1, 2})) == doctest::Approx(0.5));
    CHECK(vargha_delaney_a12(group({1, 2, 3}), group({2, 2, 4})) == doctest::Approx(3.0 / 9.0));
    CHECK_THROWS_AS(vargha_delaney_a12(group({}), group({1})), std::invalid_argument);
}

TEST_CASE("A12 complement identity and transform invariance") {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a;
        std::vector<double> b;
        for (int i = 0; i < 12; ++i) {
            a.push_back(static_cast<double>(uniform_below(rng, 20)));
            b.push_back(static_cast<double>(uniform_below(rng, 20)));
        }
        const double ab = vargha_delaney_a12(group(a), group(b));
        const double ba = vargha_delaney_a12(group(b), group(a));
        CHECK(ab + ba == 1.0);

        // Strictly increasing transform x -> x^3 + 2x.
        std::vector<double> ta;
        std::vector<double> tb;
        for (const double v : a) {
            ta.push_back(v * v * v + 2 * v);
        }
        for (const double v : b) {
            tb.push_back(v * v * v + 2 * v);
        }
        CHECK(vargha_delaney_a12(group(ta), group(tb)) == ab);
    }
}

TEST_CASE("effect label thresholds are strict at the boundaries") {
    CHECK(classify_effect(0.50) == EffectLabel::none);
    CHECK(classify_effect(0.56) == EffectLabel::none);
    CHECK(classify_effect(std::nextafter(0.56, 1.0)) == EffectLabel::small_effect);
    CHECK(classify_effect(0.64) == EffectLabel::small_effect);
    CHECK(classify_effect(std::nextafter(0.64, 1.0)) == EffectLabel::medium_effect);
    CHECK(classify_effect(0.71) == EffectLabel::medium_effect);
    CHECK(classify_effect(std::nextafter(0.71, 1.0)) == EffectLabel::large_effect);
    // Mirrored below one half.
    CHECK(classify_effect(0.44) == EffectLabel::none);
    CHECK(classify_effect(std::nextafter(0.44, 0.0)) == EffectLabel::small_effect);
    CHECK(classify_effect(0.36) == EffectLabel::small_effect);
    CHECK(classify_effect(std::nextafter(0.36, 0.0)) == EffectLabel::medium_effect);
    CHECK(classify_effect(0.29) == EffectLabel::medium_effect);
    CHECK(classify_effect(std::nextafter(0.29, 0.0)) == EffectLabel::large_effect);
}

TEST_CASE("Kruskal-Wallis hand fixtures") {
    SUBCASE("identical groups") {
        const SampleGroup g[2] = {group({3, 3, 3}), group({3, 3, 3})};
        const KruskalWallisResult r = kruskal_wallis(g);
        CHECK(r.h == 0.0);
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("separated groups") {
        const SampleGroup g[2] = {group({1, 2, 3}), group({4, 5, 6})};
        const KruskalWallisResult r = kruskal_wallis(g);
        CHECK(r.h == doctest::Approx(3.857).epsilon(1e-3));
        CHECK(r.p_value == doctest::Approx(0.0495).epsilon(0.02));
        CHECK(std::abs(r.p_value - 0.0495) < 1e-3);
    }
    SUBCASE("fewer than two groups is a usage error") {
        const SampleGroup g[1] = {group({1, 2})};
        CHECK_THROWS_AS(kruskal_wallis(std::span(g, 1)), std::invalid_argument);
    }
}

TEST_CASE("Kruskal-Wallis matches the independent reference on random fixtures") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<SampleGroup> groups;
        const std::size_t n_groups = 2 + uniform_below(rng, 2);
        for (std::size_t g = 0; g < n_groups; ++g) {
            std::vector<double> values;
            const std::size_t n = 5 + uniform_below(rng, 10);
            for (std::size_t i = 0; i < n; ++i) {
                values.push_back(static_cast<double>(uniform_below(rng, 15)));
            }
            groups.push_back(group(values));
        }
        const KruskalWallisResult mine = kruskal_wallis(groups);
        const oracle::KwOracle ref = oracle::reference_kruskal_wallis(groups);
        CHECK(mine.h == doctest::Approx(ref.h).epsilon(1e-10));
        CHECK(mine.p_value == doctest::Approx(ref.p).epsilon(1e-8));
    }
}

TEST_CASE("Kruskal-Wallis H is invariant under increasing transforms") {
    Rng rng(78);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a;
        std::vector<double> b;
        for (int i = 0; i < 10; ++i) {
            a.push_back(static_cast<double>(uniform_below(rng, 30)));
            b.push_back(static_cast<double>(uniform_below(rng, 30)));
        }
        std::vector<double> ta;
        std::vector<double> tb;
        for (const double v : a) {
            ta.push_back(std::exp(v / 10.0));
        }
        for (const double v : b) {
            tb.push_back(std::exp(v / 10.0));
        }
        const SampleGroup g1[2] = {group(a), group(b)};
        const SampleGroup g2[2] = {group(ta), group(tb)};
        CHECK(kruskal_wallis(g1).h == doctest::Approx(kruskal_wallis(g2).h).epsilon(1e-10));
    }
}

TEST_CASE("exact permutation p-value agrees with the chi-square trend") {
    const SampleGroup g[2] = {group({1, 2, 3, 4}), group({5, 6, 7, 8})};
    const KruskalWallisResult approx = kruskal_wallis(g);
    const KruskalWallisResult exact = kruskal_wallis(g, true);
    CHECK(exact.h == approx.h);
    // Full separation of 4+4 ranks: 2 of C(8,4)=70 labelings reach the
    // observed H, i.e. an exact p of 1/35.
    CHECK(exact.p_value == doctest::Approx(2.0 / 70.0));
    CHECK(exact.p_value < 0.05);
}

TEST_CASE("chi-square tail checks") {
    // df = 1 reduces to erfc; higher dfs against standard critical values.
    for (const double x : {0.5, 1.0, 2.5, 3.84, 6.0}) {
        CHECK(chi_square_sf(x, 1) == doctest::Approx(std::erfc(std::sqrt(x / 2))).epsilon(1e-10));
    }
    CHECK(chi_square_sf(5.991, 2) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(chi_square_sf(7.815, 3) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(chi_square_sf(9.210, 2) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(chi_square_sf(0.0, 4) == 1.0);
}

TEST_CASE("p-value falls as separation grows") {
    double last_p = 1.1;
    for (const double shift : {0.0, 1.0, 2.0, 4.0}) {
        std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8};
        std::vector<double> b;
        for (const double v : a) {
            b.push_back(v + shift);
        }
        const SampleGroup g[2] = {group(a), group(b)};
        const double p = kruskal_wallis(g).p_value;
        CHECK(p <= last_p + 1e-12);
        last_p = p;
    }
}

TEST_CASE("compare_groups assembles the full result") {
    const ComparisonResult r = compare_groups("coverage", group({10, 11, 12, 13, 14}),
                                              group({1, 2, 3, 4, 5}));
    CHECK(r.metric == "coverage");
    CHECK(r.a12 == doctest::Approx(1.0));
    CHECK(r.effect == EffectLabel::large_effect);
    CHECK(r.significant);
    const ComparisonResult same = compare_groups("x", group({1, 2, 3}), group({1, 2, 3}));
    CHECK(same.a12 == doctest::Approx(0.5));
    CHECK(same.effect == EffectLabel::none);
    CHECK(!same.significant);
}
