#include "tsgen/genotype.hpp"

#include "tsgen/format.hpp"

#include <charconv>
#include <stdexcept>

namespace tsgen {

void GenotypeConfig::validate() const {
    if (seq_min == 0 || seq_min > seq_max) {
        throw std::invalid_argument("genotype config: need 0 < seq_min <= seq_max");
    }
    if (suite_max == 0) {
        throw std::invalid_argument("genotype config: suite_max must be >= 1");
    }
    if (alphabet_size == 0) {
        throw std::invalid_argument("genotype config: alphabet_size must be >= 1");
    }
}

std::uint64_t suite_distance(const TestSuite& a, const TestSuite& b) {
    if (a.sequences.size() != b.sequences.size()) {
        throw std::invalid_argument("suite_distance: suites have different sequence counts");
    }
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < a.sequences.size(); ++i) {
        const TestSequence& s1 = a.sequences[i];
        const TestSequence& s2 = b.sequences[i];
        const std::size_t l1 = s1.size();
        const std::size_t l2 = s2.size();
        total += l1 > l2 ? l1 - l2 : l2 - l1;
        const std::size_t common = l1 < l2 ? l1 : l2;
        for (std::size_t j = 0; j < common; ++j) {
            total += s1[j] != s2[j];
        }
    }
    return total;
}

std::uint64_t suite_distance(const TestSuite& a, const TestSuite& b, const GenotypeConfig& cfg) {
    if (a.sequences.size() != cfg.suite_max || b.sequences.size() != cfg.suite_max) {
        throw std::invalid_argument("suite_distance: suite does not match configured suite_max");
    }
    return suite_distance(a, b);
}

std::uint64_t max_possible_distance(const GenotypeConfig& cfg) {
    return static_cast<std::uint64_t>(cfg.suite_max) * static_cast<std::uint64_t>(cfg.seq_max);
}

std::vector<std::uint64_t> distance_matrix(std::span<const TestSuite> suites) {
    const std::size_t n = suites.size();
    std::vector<std::uint64_t> d(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint64_t v = suite_distance(suites[i], suites[j]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    return d;
}

TestSuite random_suite(const GenotypeConfig& cfg, Rng& rng) {
    TestSuite suite;
    suite.sequences.resize(cfg.suite_max);
    const std::uint64_t span = cfg.seq_max - cfg.seq_min + 1;
    for (TestSequence& seq : suite.sequences) {
        const std::size_t len = cfg.seq_min + static_cast<std::size_t>(uniform_below(rng, span));
        seq.resize(len);
        for (Event& e : seq) {
            e = static_cast<Event>(uniform_below(rng, cfg.alphabet_size));
        }
    }
    return suite;
}

bool conforms(const TestSuite& suite, const GenotypeConfig& cfg) {
    if (suite.sequences.size() != cfg.suite_max) {
        return false;
    }
    for (const TestSequence& seq : suite.sequences) {
        if (seq.size() < cfg.seq_min || seq.size() > cfg.seq_max) {
            return false;
        }
        for (const Event e : seq) {
            if (e >= cfg.alphabet_size) {
                return false;
            }
        }
    }
    return true;
}

std::string suite_to_text(const TestSuite& suite) {
    std::string out;
    for (const TestSequence& seq : suite.sequences) {
        for (std::size_t j = 0; j < seq.size(); ++j) {
            if (j != 0) {
                out += ' ';
            }
            out += format_u64(seq[j]);
        }
        out += '\n';
    }
    return out;
}

std::string suites_to_text(std::span<const TestSuite> suites) {
    std::string out;
    for (std::size_t i = 0; i < suites.size(); ++i) {
        if (i != 0) {
            out += '\n';
        }
        out += suite_to_text(suites[i]);
    }
    return out;
}

std::vector<TestSuite> parse_suites(std::string_view text) {
    std::vector<TestSuite> suites;
    TestSuite current;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        if (line.empty()) {
            if (!current.sequences.empty()) {
                suites.push_back(std::move(current));
                current = TestSuite{};
            }
        } else {
            TestSequence seq;
            const char* p = line.data();
            const char* end = line.data() + line.size();
            while (p < end) {
                while (p < end && *p == ' ') {
                    ++p;
                }
                if (p >= end) {
                    break;
                }
                std::uint32_t value = 0;
                const auto res = std::from_chars(p, end, value);
                if (res.ec != std::errc{}) {
                    throw std::invalid_argument("parse_suites: malformed event token");
                }
                seq.push_back(value);
                p = res.ptr;
            }
            current.sequences.push_back(std::move(seq));
        }
        if (eol == std::string_view::npos) {
            break;
        }
        pos = eol + 1;
    }
    if (!current.sequences.empty()) {
        suites.push_back(std::move(current));
    }
    return suites;
}

}  // namespace tsgen
