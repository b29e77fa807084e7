#include "tsgen/variation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tsgen {

void VariationConfig::validate() const {
    if (crossover_prob < 0.0 || crossover_prob > 1.0) {
        throw std::invalid_argument("variation config: crossover_prob must be in [0,1]");
    }
    if (mutation_prob < 0.0 || mutation_prob > 1.0) {
        throw std::invalid_argument("variation config: mutation_prob must be in [0,1]");
    }
}

std::pair<TestSuite, TestSuite> crossover(const TestSuite& a, const TestSuite& b, Rng& rng) {
    if (a.sequences.size() != b.sequences.size()) {
        throw std::invalid_argument("crossover: suites have different sequence counts");
    }
    const std::size_t m = a.sequences.size();
    if (m <= 1) {
        return {a, b};
    }
    const std::size_t cut = 1 + static_cast<std::size_t>(uniform_below(rng, m - 1));
    TestSuite c1 = a;
    TestSuite c2 = b;
    for (std::size_t i = cut; i < m; ++i) {
        std::swap(c1.sequences[i], c2.sequences[i]);
    }
    return {std::move(c1), std::move(c2)};
}

namespace {

// Two distinct indices in [0, n), n >= 2: second drawn from [0, n-1) and
// shifted past the first.
std::pair<std::size_t, std::size_t> two_distinct(Rng& rng, std::size_t n) {
    const std::size_t i = static_cast<std::size_t>(uniform_below(rng, n));
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, n - 1));
    if (j >= i) {
        ++j;
    }
    return {i, j};
}

}  // namespace

TestSuite mutate(const TestSuite& t, Rng& rng) {
    TestSuite out = t;
    const std::uint64_t move = uniform_below(rng, 2);
    if (move == 0) {
        const std::size_t m = out.sequences.size();
        if (m >= 2) {
            const auto [i, j] = two_distinct(rng, m);
            std::swap(out.sequences[i], out.sequences[j]);
        }
    } else if (!out.sequences.empty()) {
        const std::size_t k = static_cast<std::size_t>(uniform_below(rng, out.sequences.size()));
        TestSequence& seq = out.sequences[k];
        if (seq.size() >= 2) {
            const auto [i, j] = two_distinct(rng, seq.size());
            std::swap(seq[i], seq[j]);
        }
    }
    return out;
}

namespace {

std::size_t tournament_pick(std::size_t n, std::span<const SelectionKey> keys, Rng& rng) {
    const std::size_t i = static_cast<std::size_t>(uniform_below(rng, n));
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, n));
    if (i == j) {
        return i;
    }
    if (!keys.empty()) {
        if (keys[i].rank != keys[j].rank) {
            return keys[i].rank < keys[j].rank ? i : j;
        }
        if (keys[i].crowding != keys[j].crowding) {
            return keys[i].crowding > keys[j].crowding ? i : j;
        }
    }
    return uniform_below(rng, 2) == 0 ? i : j;
}

}  // namespace

std::vector<TestSuite> whole_suite_variation(std::span<const TestSuite> parents,
                                             std::span<const SelectionKey> keys,
                                             std::size_t offspring_count,
                                             const VariationConfig& vcfg, Rng& rng) {
    if (parents.empty()) {
        throw std::invalid_argument("whole_suite_variation: empty parent list");
    }
    if (!keys.empty() && keys.size() != parents.size()) {
        throw std::invalid_argument("whole_suite_variation: keys do not match parents");
    }
    std::vector<TestSuite> offspring;
    offspring.reserve(offspring_count);
    while (offspring.size() < offspring_count) {
        const std::size_t a = tournament_pick(parents.size(), keys, rng);
        const std::size_t b = tournament_pick(parents.size(), keys, rng);
        TestSuite c1;
        TestSuite c2;
        if (uniform01(rng) < vcfg.crossover_prob) {
            std::tie(c1, c2) = crossover(parents[a], parents[b], rng);
        } else {
            c1 = parents[a];
            c2 = parents[b];
        }
        if (uniform01(rng) < vcfg.mutation_prob) {
            c1 = mutate(c1, rng);
        }
        if (uniform01(rng) < vcfg.mutation_prob) {
            c2 = mutate(c2, rng);
        }
        offspring.push_back(std::move(c1));
        if (offspring.size() < offspring_count) {
            offspring.push_back(std::move(c2));
        }
    }
    return offspring;
}

std::vector<std::size_t> select_most_distant_indices(const std::vector<std::uint64_t>& distances,
                                                     std::size_t pool_size, std::size_t count) {
    if (count == 0 || count > pool_size) {
        throw std::invalid_argument("select_most_distant: count must be in [1, pool size]");
    }
    const auto dist = [&](std::size_t i, std::size_t j) { return distances[i * pool_size + j]; };

    if (count == 1) {
        std::size_t best = 0;
        std::uint64_t best_sum = 0;
        for (std::size_t i = 0; i < pool_size; ++i) {
            std::uint64_t sum = 0;
            for (std::size_t j = 0; j < pool_size; ++j) {
                sum += dist(i, j);
            }
            if (i == 0 || sum > best_sum) {
                best = i;
                best_sum = sum;
            }
        }
        return {best};
    }

    // Seed with the lowest-index pair at maximum distance.
    std::size_t seed_a = 0;
    std::size_t seed_b = 1;
    std::uint64_t best_pair = dist(0, 1);
    for (std::size_t i = 0; i < pool_size; ++i) {
        for (std::size_t j = i + 1; j < pool_size; ++j) {
            if (dist(i, j) > best_pair) {
                best_pair = dist(i, j);
                seed_a = i;
                seed_b = j;
            }
        }
    }

    std::vector<std::size_t> selected{seed_a, seed_b};
    std::vector<bool> taken(pool_size, false);
    taken[seed_a] = true;
    taken[seed_b] = true;
    std::vector<std::uint64_t> min_dist(pool_size);
    for (std::size_t v = 0; v < pool_size; ++v) {
        min_dist[v] = std::min(dist(v, seed_a), dist(v, seed_b));
    }

    while (selected.size() < count) {
        std::size_t best = pool_size;
        std::uint64_t best_min = 0;
        for (std::size_t v = 0; v < pool_size; ++v) {
            if (taken[v]) {
                continue;
            }
            if (best == pool_size || min_dist[v] > best_min) {
                best = v;
                best_min = min_dist[v];
            }
        }
        taken[best] = true;
        selected.push_back(best);
        for (std::size_t v = 0; v < pool_size; ++v) {
            min_dist[v] = std::min(min_dist[v], dist(v, best));
        }
    }
    return selected;
}

std::vector<std::size_t> select_most_distant_indices(std::span<const TestSuite> pool,
                                                     std::size_t count) {
    return select_most_distant_indices(distance_matrix(pool), pool.size(), count);
}

std::vector<TestSuite> select_most_distant(std::span<const TestSuite> pool, std::size_t count) {
    std::vector<TestSuite> out;
    out.reserve(count);
    for (const std::size_t i : select_most_distant_indices(pool, count)) {
        out.push_back(pool[i]);
    }
    return out;
}

}  // namespace tsgen
