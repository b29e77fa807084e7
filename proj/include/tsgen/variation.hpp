#pragma once

#include "tsgen/genotype.hpp"
#include "tsgen/rng.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tsgen {

struct VariationConfig {
    double crossover_prob = 0.7;
    double mutation_prob = 0.3;

    void validate() const;  // throws std::invalid_argument
};

/// Parent ordering key for mating selection: lower rank wins, then larger
/// crowding distance.
struct SelectionKey {
    std::size_t rank = 0;
    double crowding = 0.0;
};

/// Single-point crossover at the suite (sequence-list) level: a cut index c
/// is drawn uniformly in [1, suite_max - 1] and the children swap sequence
/// tails. With a single sequence per suite there is no cut point and the
/// parents are returned unchanged (no draw is consumed).
std::pair<TestSuite, TestSuite> crossover(const TestSuite& a, const TestSuite& b, Rng& rng);

/// One shuffle move, chosen uniformly between (i) swapping two distinct
/// sequence positions of the suite and (ii) swapping two distinct event
/// positions inside one uniformly chosen sequence. Degenerate sizes make the
/// chosen move a no-op. The event multiset of the suite is preserved.
///
/// Draw protocol (mirrored by the differential test oracle): the move id is
/// always drawn; move (i) draws two positions only when the suite has >= 2
/// sequences; move (ii) always draws the sequence index and draws two event
/// positions only when that sequence has >= 2 events.
TestSuite mutate(const TestSuite& t, Rng& rng);

/// Produces `offspring_count` offspring from `parents`. Each pairing picks
/// two parents by binary tournament on (rank, crowding) with a random
/// tie-break, applies crossover with probability vcfg.crossover_prob and
/// mutation to each child with probability vcfg.mutation_prob. An empty
/// `keys` span treats all parents as equally ranked. Throws
/// std::invalid_argument on an empty parent list.
///
/// Draw protocol per pairing: tournament a (two index draws, tie coin only
/// when the indices differ and the keys compare equal), tournament b, one
/// crossover roll, then one mutation roll per child (both children are always
/// rolled, even when only the first is kept to reach an odd count).
std::vector<TestSuite> whole_suite_variation(std::span<const TestSuite> parents,
                                             std::span<const SelectionKey> keys,
                                             std::size_t offspring_count,
                                             const VariationConfig& vcfg, Rng& rng);

/// Greedy farthest-point subset selection, deterministic. Seeds with the
/// lowest-index pair realizing the maximum pairwise distance, then repeatedly
/// adds the pool element maximizing its minimum distance to the selected set
/// (lowest index on ties). count == 1 degenerates to the element with the
/// largest summed distance to the rest. Returned indices are in selection
/// order. Throws std::invalid_argument when count is 0 or exceeds the pool.
std::vector<std::size_t> select_most_distant_indices(std::span<const TestSuite> pool,
                                                     std::size_t count);

/// Same selection over a precomputed row-major pairwise distance matrix.
std::vector<std::size_t> select_most_distant_indices(const std::vector<std::uint64_t>& distances,
                                                     std::size_t pool_size, std::size_t count);

/// Convenience wrapper returning the selected suites in selection order.
std::vector<TestSuite> select_most_distant(std::span<const TestSuite> pool, std::size_t count);

}  // namespace tsgen
