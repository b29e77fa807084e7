#pragma once

// Independently coded plain NSGA-II, used for the differential test against
// the engine with all diversity mechanisms switched off. Follows the same
// documented draw protocol (tournament, crossover, mutation) and the same
// tie conventions (index-ordered sorts, objective order crashes/coverage/
// length), but shares no selection or sorting code with the engine. Fitness
// evaluation reuses the app model evaluator, which is common infrastructure
// on both sides of the comparison.

#include "tsgen/genotype.hpp"
#include "tsgen/rng.hpp"
#include "tsgen/sut.hpp"
#include "tsgen/variation.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace oracle {

class ReferenceNsga2 {
  public:
    ReferenceNsga2(const tsgen::GenotypeConfig& gcfg, const tsgen::VariationConfig& vcfg,
                   std::size_t size_pop, std::size_t size_off, const tsgen::AppModel& app,
                   std::uint64_t seed)
        : gcfg_(gcfg), vcfg_(vcfg), size_pop_(size_pop), size_off_(size_off), app_(&app),
          rng_(seed) {
        for (std::size_t i = 0; i < size_pop_; ++i) {
            suites_.push_back(random_suite());
        }
        for (const tsgen::TestSuite& s : suites_) {
            fitness_.push_back(tsgen::evaluate(s, *app_).fitness);
        }
    }

    const std::vector<tsgen::TestSuite>& population() const { return suites_; }

    void step() {
        // Mating keys from the current population.
        const std::vector<std::size_t> ranks = peel_ranks(fitness_);
        const std::vector<double> crowd = crowding_by_rank(fitness_, ranks);

        std::vector<tsgen::TestSuite> children;
        while (children.size() < size_off_) {
            const std::size_t a = tournament(ranks, crowd);
            const std::size_t b = tournament(ranks, crowd);
            tsgen::TestSuite c1;
            tsgen::TestSuite c2;
            if (tsgen::uniform01(rng_) < vcfg_.crossover_prob) {
                std::tie(c1, c2) = cross(suites_[a], suites_[b]);
            } else {
                c1 = suites_[a];
                c2 = suites_[b];
            }
            if (tsgen::uniform01(rng_) < vcfg_.mutation_prob) {
                c1 = shuffle_move(c1);
            }
            if (tsgen::uniform01(rng_) < vcfg_.mutation_prob) {
                c2 = shuffle_move(c2);
            }
            children.push_back(std::move(c1));
            if (children.size() < size_off_) {
                children.push_back(std::move(c2));
            }
        }

        std::vector<tsgen::TestSuite> pool = suites_;
        std::vector<tsgen::FitnessVector> pool_fitness = fitness_;
        for (tsgen::TestSuite& c : children) {
            pool_fitness.push_back(tsgen::evaluate(c, *app_).fitness);
            pool.push_back(std::move(c));
        }

        // Environmental selection: rank, then crowding, then index.
        const std::vector<std::size_t> pool_ranks = peel_ranks(pool_fitness);
        const std::vector<double> pool_crowd = crowding_by_rank(pool_fitness, pool_ranks);
        std::vector<std::size_t> order(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (pool_ranks[x] != pool_ranks[y]) {
                return pool_ranks[x] < pool_ranks[y];
            }
            if (pool_crowd[x] != pool_crowd[y]) {
                return pool_crowd[x] > pool_crowd[y];
            }
            return x < y;
        });
        std::vector<tsgen::TestSuite> next_suites;
        std::vector<tsgen::FitnessVector> next_fitness;
        for (std::size_t k = 0; k < size_pop_; ++k) {
            next_suites.push_back(pool[order[k]]);
            next_fitness.push_back(pool_fitness[order[k]]);
        }
        suites_ = std::move(next_suites);
        fitness_ = std::move(next_fitness);
    }

  private:
    tsgen::TestSuite random_suite() {
        tsgen::TestSuite suite;
        suite.sequences.resize(gcfg_.suite_max);
        for (tsgen::TestSequence& seq : suite.sequences) {
            const std::size_t len =
                gcfg_.seq_min + static_cast<std::size_t>(
                                    tsgen::uniform_below(rng_, gcfg_.seq_max - gcfg_.seq_min + 1));
            seq.resize(len);
            for (tsgen::Event& e : seq) {
                e = static_cast<tsgen::Event>(tsgen::uniform_below(rng_, gcfg_.alphabet_size));
            }
        }
        return suite;
    }

    static bool strictly_better(const tsgen::FitnessVector& a, const tsgen::FitnessVector& b) {
        const bool ge =
            a.crashes >= b.crashes && a.coverage >= b.coverage && a.length <= b.length;
        const bool ne =
            a.crashes != b.crashes || a.coverage != b.coverage || a.length != b.length;
        return ge && ne;
    }

    /// Rank by repeated front removal.
    static std::vector<std::size_t> peel_ranks(const std::vector<tsgen::FitnessVector>& fitness) {
        const std::size_t n = fitness.size();
        std::vector<std::size_t> rank(n, 0);
        std::vector<bool> assigned(n, false);
        std::size_t done = 0;
        std::size_t level = 0;
        while (done < n) {
            std::vector<std::size_t> level_members;
            for (std::size_t i = 0; i < n; ++i) {
                if (assigned[i]) {
                    continue;
                }
                bool dominated = false;
                for (std::size_t j = 0; j < n && !dominated; ++j) {
                    dominated = !assigned[j] && j != i && strictly_better(fitness[j], fitness[i]);
                }
                if (!dominated) {
                    level_members.push_back(i);
                }
            }
            for (const std::size_t i : level_members) {
                rank[i] = level;
                assigned[i] = true;
            }
            done += level_members.size();
            ++level;
        }
        return rank;
    }

    /// Crowding within each rank level; objective order crashes, coverage,
    /// length; equal values ordered by index; boundaries infinite.
    static std::vector<double> crowding_by_rank(const std::vector<tsgen::FitnessVector>& fitness,
                                                const std::vector<std::size_t>& ranks) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        const std::size_t n = fitness.size();
        std::vector<double> crowd(n, 0.0);
        const std::size_t max_rank =
            n == 0 ? 0 : *std::max_element(ranks.begin(), ranks.end());
        for (std::size_t level = 0; level <= max_rank; ++level) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i) {
                if (ranks[i] == level) {
                    members.push_back(i);
                }
            }
            if (members.size() <= 2) {
                for (const std::size_t i : members) {
                    crowd[i] = inf;
                }
                continue;
            }
            for (std::size_t obj = 0; obj < 3; ++obj) {
                const auto value = [&](std::size_t i) -> double {
                    if (obj == 0) {
                        return static_cast<double>(fitness[i].crashes);
                    }
                    return obj == 1 ? fitness[i].coverage : fitness[i].length;
                };
                std::vector<std::size_t> sorted = members;
                std::sort(sorted.begin(), sorted.end(), [&](std::size_t x, std::size_t y) {
                    if (value(x) != value(y)) {
                        return value(x) < value(y);
                    }
                    return x < y;
                });
                const double lo = value(sorted.front());
                const double hi = value(sorted.back());
                if (hi == lo) {
                    continue;
                }
                crowd[sorted.front()] = inf;
                crowd[sorted.back()] = inf;
                for (std::size_t k = 1; k + 1 < sorted.size(); ++k) {
                    crowd[sorted[k]] += (value(sorted[k + 1]) - value(sorted[k - 1])) / (hi - lo);
                }
            }
        }
        return crowd;
    }

    std::size_t tournament(const std::vector<std::size_t>& ranks,
                           const std::vector<double>& crowd) {
        const std::size_t i = static_cast<std::size_t>(tsgen::uniform_below(rng_, suites_.size()));
        const std::size_t j = static_cast<std::size_t>(tsgen::uniform_below(rng_, suites_.size()));
        if (i == j) {
            return i;
        }
        if (ranks[i] != ranks[j]) {
            return ranks[i] < ranks[j] ? i : j;
        }
        if (crowd[i] != crowd[j]) {
            return crowd[i] > crowd[j] ? i : j;
        }
        return tsgen::uniform_below(rng_, 2) == 0 ? i : j;
    }

    std::pair<tsgen::TestSuite, tsgen::TestSuite> cross(const tsgen::TestSuite& a,
                                                        const tsgen::TestSuite& b) {
        const std::size_t m = a.sequences.size();
        if (m <= 1) {
            return {a, b};
        }
        const std::size_t cut = 1 + static_cast<std::size_t>(tsgen::uniform_below(rng_, m - 1));
        tsgen::TestSuite c1;
        tsgen::TestSuite c2;
        for (std::size_t i = 0; i < m; ++i) {
            c1.sequences.push_back(i < cut ? a.sequences[i] : b.sequences[i]);
            c2.sequences.push_back(i < cut ? b.sequences[i] : a.sequences[i]);
        }
        return {c1, c2};
    }

    tsgen::TestSuite shuffle_move(const tsgen::TestSuite& t) {
        tsgen::TestSuite out = t;
        if (tsgen::uniform_below(rng_, 2) == 0) {
            if (out.sequences.size() >= 2) {
                const std::size_t i =
                    static_cast<std::size_t>(tsgen::uniform_below(rng_, out.sequences.size()));
                std::size_t j =
                    static_cast<std::size_t>(tsgen::uniform_below(rng_, out.sequences.size() - 1));
                if (j >= i) {
                    ++j;
                }
                std::swap(out.sequences[i], out.sequences[j]);
            }
        } else if (!out.sequences.empty()) {
            const std::size_t k =
                static_cast<std::size_t>(tsgen::uniform_below(rng_, out.sequences.size()));
            tsgen::TestSequence& seq = out.sequences[k];
            if (seq.size() >= 2) {
                const std::size_t i =
                    static_cast<std::size_t>(tsgen::uniform_below(rng_, seq.size()));
                std::size_t j =
                    static_cast<std::size_t>(tsgen::uniform_below(rng_, seq.size() - 1));
                if (j >= i) {
                    ++j;
                }
                std::swap(seq[i], seq[j]);
            }
        }
        return out;
    }

    tsgen::GenotypeConfig gcfg_;
    tsgen::VariationConfig vcfg_;
    std::size_t size_pop_;
    std::size_t size_off_;
    const tsgen::AppModel* app_;
    tsgen::Rng rng_;
    std::vector<tsgen::TestSuite> suites_;
    std::vector<tsgen::FitnessVector> fitness_;
};

}  // namespace oracle
