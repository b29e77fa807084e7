#include "tsgen/variation.hpp"

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <map>

using namespace tsgen;

namespace {

std::map<TestSequence, int> sequence_multiset(const TestSuite& a, const TestSuite& b) {
    std::map<TestSequence, int> counts;
    for (const TestSequence& s : a.sequences) {
        ++counts[s];
    }
    for (const TestSequence& s : b.sequences) {
        ++counts[s];
    }
    return counts;
}

std::map<Event, int> event_multiset(const TestSuite& t) {
    std::map<Event, int> counts;
    for (const TestSequence& s : t.sequences) {
        for (const Event e : s) {
            ++counts[e];
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("crossover of identical parents is identity") {
    const GenotypeConfig cfg{4, 2, 6, 9, 0};
    Rng rng(1);
    const TestSuite p = random_suite(cfg, rng);
    const auto [c1, c2] = crossover(p, p, rng);
    CHECK(c1 == p);
    CHECK(c2 == p);
}

TEST_CASE("crossover swaps tails and preserves the sequence multiset") {
    const GenotypeConfig cfg{5, 2, 8, 9, 0};
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const TestSuite a = random_suite(cfg, rng);
        const TestSuite b = random_suite(cfg, rng);
        const auto [c1, c2] = crossover(a, b, rng);
        CHECK(sequence_multiset(c1, c2) == sequence_multiset(a, b));
        // Children split at one cut: a prefix from one parent, the tail from
        // the other, index-aligned.
        bool valid_split = false;
        for (std::size_t cut = 1; cut < cfg.suite_max; ++cut) {
            bool match = true;
            for (std::size_t i = 0; i < cfg.suite_max && match; ++i) {
                const TestSequence& expect1 = i < cut ? a.sequences[i] : b.sequences[i];
                const TestSequence& expect2 = i < cut ? b.sequences[i] : a.sequences[i];
                match = c1.sequences[i] == expect1 && c2.sequences[i] == expect2;
            }
            valid_split = valid_split || match;
        }
        CHECK(valid_split);
    }
}

TEST_CASE("crossover with a single sequence returns copies") {
    const GenotypeConfig cfg{1, 2, 6, 9, 0};
    Rng rng(3);
    const TestSuite a = random_suite(cfg, rng);
    const TestSuite b = random_suite(cfg, rng);
    const auto [c1, c2] = crossover(a, b, rng);
    CHECK(c1 == a);
    CHECK(c2 == b);
}

TEST_CASE("mutate preserves the event multiset and per-mutation invariants") {
    const GenotypeConfig cfg{5, 2, 10, 6, 0};
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const TestSuite t = random_suite(cfg, rng);
        const TestSuite m = mutate(t, rng);
        CHECK(event_multiset(m) == event_multiset(t));
        // Sequence lengths as a multiset never change under either move.
        std::vector<std::size_t> before;
        std::vector<std::size_t> after;
        for (const TestSequence& s : t.sequences) {
            before.push_back(s.size());
        }
        for (const TestSequence& s : m.sequences) {
            after.push_back(s.size());
        }
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);
    }
}

TEST_CASE("mutate on a degenerate suite is a no-op") {
    TestSuite tiny;
    tiny.sequences = {{42}};
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        CHECK(mutate(tiny, rng) == tiny);
    }
}

TEST_CASE("repeated mutation moves away from the original") {
    const GenotypeConfig cfg{5, 20, 60, 8, 0};
    Rng rng(6);
    const TestSuite original = random_suite(cfg, rng);
    TestSuite current = original;
    for (int i = 0; i < 1000; ++i) {
        current = mutate(current, rng);
    }
    CHECK(suite_distance(original, current) > 0);
}

TEST_CASE("whole_suite_variation copies parents when both rates are zero") {
    const GenotypeConfig cfg{5, 2, 8, 9, 0};
    Rng rng(7);
    std::vector<TestSuite> parents;
    for (int i = 0; i < 6; ++i) {
        parents.push_back(random_suite(cfg, rng));
    }
    const std::vector<TestSuite> off =
        whole_suite_variation(parents, {}, 10, VariationConfig{0.0, 0.0}, rng);
    REQUIRE(off.size() == 10);
    for (const TestSuite& child : off) {
        CHECK(std::count(parents.begin(), parents.end(), child) > 0);
    }
}

TEST_CASE("whole_suite_variation on identical parents with pure crossover") {
    const GenotypeConfig cfg{5, 2, 8, 9, 0};
    Rng rng(8);
    const TestSuite p = random_suite(cfg, rng);
    const std::vector<TestSuite> parents(4, p);
    const std::vector<TestSuite> off =
        whole_suite_variation(parents, {}, 8, VariationConfig{1.0, 0.0}, rng);
    for (const TestSuite& child : off) {
        CHECK(child == p);
    }
}

TEST_CASE("whole_suite_variation is deterministic for a fixed seed") {
    const GenotypeConfig cfg{5, 20, 100, 30, 0};
    Rng setup(9);
    std::vector<TestSuite> parents;
    for (int i = 0; i < 10; ++i) {
        parents.push_back(random_suite(cfg, setup));
    }
    Rng r1(99);
    Rng r2(99);
    const auto off1 = whole_suite_variation(parents, {}, 20, VariationConfig{0.7, 0.3}, r1);
    const auto off2 = whole_suite_variation(parents, {}, 20, VariationConfig{0.7, 0.3}, r2);
    CHECK(suites_to_text(off1) == suites_to_text(off2));
}

TEST_CASE("whole_suite_variation offspring conform to the configuration") {
    const GenotypeConfig cfg{5, 20, 100, 30, 0};
    Rng rng(10);
    std::vector<TestSuite> parents;
    for (int i = 0; i < 8; ++i) {
        parents.push_back(random_suite(cfg, rng));
    }
    for (const TestSuite& child :
         whole_suite_variation(parents, {}, 30, VariationConfig{0.7, 0.3}, rng)) {
        CHECK(conforms(child, cfg));
    }
}

TEST_CASE("whole_suite_variation rejects an empty parent list") {
    Rng rng(11);
    CHECK_THROWS_AS(whole_suite_variation({}, {}, 4, VariationConfig{}, rng),
                    std::invalid_argument);
}

TEST_CASE("select_most_distant basics") {
    // Distances: d(A,B)=10, d(A,C)=2, d(B,C)=8 via hand-built suites.
    TestSuite a;
    a.sequences = {{0, 0, 0, 0, 0, 0, 0, 0, 0, 0}};
    TestSuite b;
    b.sequences = {{1, 1, 1, 1, 1, 1, 1, 1, 1, 1}};
    TestSuite c;
    c.sequences = {{0, 0, 0, 0, 0, 0, 0, 0, 1, 1}};
    REQUIRE(suite_distance(a, b) == 10);
    REQUIRE(suite_distance(a, c) == 2);
    REQUIRE(suite_distance(b, c) == 8);

    const std::vector<TestSuite> pool{a, b, c};
    SUBCASE("count 2 picks the farthest pair") {
        const auto idx = select_most_distant_indices(pool, 2);
        REQUIRE(idx.size() == 2);
        CHECK(idx[0] == 0);
        CHECK(idx[1] == 1);
    }
    SUBCASE("count 1 maximizes summed distance") {
        // Sums: A=12, B=18, C=10.
        const auto idx = select_most_distant_indices(pool, 1);
        REQUIRE(idx.size() == 1);
        CHECK(idx[0] == 1);
    }
    SUBCASE("count equal to pool returns everything") {
        auto idx = select_most_distant_indices(pool, 3);
        std::sort(idx.begin(), idx.end());
        CHECK(idx == std::vector<std::size_t>{0, 1, 2});
    }
    SUBCASE("count above pool size is a usage error") {
        CHECK_THROWS_AS(select_most_distant_indices(pool, 4), std::invalid_argument);
        CHECK_THROWS_AS(select_most_distant_indices(pool, 0), std::invalid_argument);
    }
}

TEST_CASE("select_most_distant greedy invariant on random pools") {
    const GenotypeConfig cfg{3, 2, 12, 5, 0};
    Rng rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<TestSuite> pool;
        for (int i = 0; i < 12; ++i) {
            pool.push_back(random_suite(cfg, rng));
        }
        const std::size_t count = 2 + uniform_below(rng, 9);
        const auto selected = select_most_distant_indices(pool, count);
        REQUIRE(selected.size() == count);

        // Replay: the seed pair realizes the max pairwise distance, and every
        // later pick maximizes its min distance to the already-selected set.
        const auto d = distance_matrix(pool);
        const auto dist = [&](std::size_t i, std::size_t j) { return d[i * pool.size() + j]; };
        std::uint64_t max_pair = 0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                max_pair = std::max(max_pair, dist(i, j));
            }
        }
        CHECK(dist(selected[0], selected[1]) == max_pair);
        for (std::size_t step = 2; step < selected.size(); ++step) {
            const auto min_to_selected = [&](std::size_t v) {
                std::uint64_t m = dist(v, selected[0]);
                for (std::size_t s = 1; s < step; ++s) {
                    m = std::min(m, dist(v, selected[s]));
                }
                return m;
            };
            const std::uint64_t picked = min_to_selected(selected[step]);
            for (std::size_t v = 0; v < pool.size(); ++v) {
                if (std::find(selected.begin(), selected.begin() + step + 1, v) ==
                    selected.begin() + step + 1) {
                    CHECK(picked >= min_to_selected(v));
                }
            }
        }
    }
}
