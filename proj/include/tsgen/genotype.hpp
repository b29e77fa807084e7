#pragma once

#include "tsgen/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsgen {

/// Opaque GUI-level event token: an index into the app model's event alphabet.
using Event = std::uint32_t;

/// One test case: an ordered list of events.
using TestSequence = std::vector<Event>;

/// The search-space individual: a fixed count of ordered test sequences.
struct TestSuite {
    std::vector<TestSequence> sequences;

    bool operator==(const TestSuite&) const = default;
};

/// Representation parameters shared by every suite of a run.
struct GenotypeConfig {
    std::size_t suite_max = 5;    // sequences per suite
    std::size_t seq_min = 20;     // shortest sequence at construction
    std::size_t seq_max = 500;    // longest sequence
    std::uint32_t alphabet_size = 1;
    std::uint64_t rng_seed = 0;

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

/// Genotypic distance between two suites: for each sequence index, the
/// absolute length difference plus the number of positions over the common
/// prefix where the events differ. Symmetric, zero iff the suites are equal.
std::uint64_t suite_distance(const TestSuite& a, const TestSuite& b);

/// As above, after checking both suites carry exactly cfg.suite_max
/// sequences. Throws std::invalid_argument on a structural mismatch.
std::uint64_t suite_distance(const TestSuite& a, const TestSuite& b, const GenotypeConfig& cfg);

/// Largest distance two conforming suites can realize: suite_max * seq_max.
std::uint64_t max_possible_distance(const GenotypeConfig& cfg);

/// Full pairwise distance matrix, row-major n*n (symmetric, zero diagonal).
std::vector<std::uint64_t> distance_matrix(std::span<const TestSuite> suites);

/// Suite of suite_max sequences with uniform lengths in [seq_min, seq_max]
/// and events drawn uniformly from the alphabet. Deterministic in rng state.
TestSuite random_suite(const GenotypeConfig& cfg, Rng& rng);

bool conforms(const TestSuite& suite, const GenotypeConfig& cfg);

/// Line-oriented text form: one sequence per line as space-separated decimal
/// event ids, suites separated by a single blank line, newline-terminated.
/// Archived sequences are always non-empty, so blank lines are unambiguous.
std::string suite_to_text(const TestSuite& suite);
std::string suites_to_text(std::span<const TestSuite> suites);
std::vector<TestSuite> parse_suites(std::string_view text);

}  // namespace tsgen
