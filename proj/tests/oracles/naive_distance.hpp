#pragma once

// Independent re-implementation of the suite distance, written directly from
// its definition: iterate sequences by index, add the absolute length
// difference, then walk event positions and count mismatches until the
// shorter sequence ends. Used as the oracle for the production distance.

#include "tsgen/genotype.hpp"

#include <cstdint>
#include <cstdlib>

namespace oracle {

inline std::uint64_t naive_suite_distance(const tsgen::TestSuite& t1, const tsgen::TestSuite& t2) {
    std::uint64_t distance = 0;
    for (std::size_t i = 0; i < t1.sequences.size(); ++i) {
        const auto& s1 = t1.sequences[i];
        const auto& s2 = t2.sequences[i];
        distance += static_cast<std::uint64_t>(
            std::llabs(static_cast<long long>(s1.size()) - static_cast<long long>(s2.size())));
        for (std::size_t j = 0;; ++j) {
            if (s1.size() <= j || s2.size() <= j) {
                break;
            }
            if (s1[j] != s2[j]) {
                distance += 1;
            }
        }
    }
    return distance;
}

}  // namespace oracle
