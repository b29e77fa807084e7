#pragma once

#include "tsgen/genotype.hpp"
#include "tsgen/sut.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsgen {

struct EvaluatedIndividual {
    TestSuite suite;
    FitnessVector fitness;
};

/// True when a is at least as good as b in all three objectives (crashes and
/// coverage maximized, length minimized) and strictly better in one.
bool dominates(const FitnessVector& a, const FitnessVector& b);

/// Indices of the maximal mutually non-dominated subset, in input order.
std::vector<std::size_t> pareto_front_indices(std::span<const FitnessVector> fitness);
std::vector<EvaluatedIndividual> pareto_front(std::span<const EvaluatedIndividual> pop);

/// Proportion of Pareto-optimal solutions in the population.
double ppos(std::span<const EvaluatedIndividual> pop);

/// Reference (nadir) point for hypervolume: zero crashes, zero coverage and
/// the given worst sequence length.
FitnessVector hv_reference(double worst_length = 500.0);

/// Exact dominated hypervolume of a three-objective front against the
/// reference point. Length contributes as (reference.length - length).
/// Throws std::invalid_argument when a point falls outside the reference box.
double hypervolume(std::span<const FitnessVector> front, const FitnessVector& reference);

struct Diameters {
    std::uint64_t maxdiam = 0;
    double avgdiam = 0.0;
    std::uint64_t mindiam = 0;
};

/// Max, mean and min pairwise genotypic distance of the population. The mean
/// runs over all ordered pairs i != j. Requires at least two individuals.
Diameters diameters(std::span<const EvaluatedIndividual> pop);

/// avgdiam in proportion to the largest possible distance for the config.
double reldiam(std::span<const EvaluatedIndividual> pop, const GenotypeConfig& cfg);

/// Graph over Pareto-optimal solutions; vertices are connected when their
/// genotypic distance is strictly below the threshold.
struct ParetoGraph {
    std::vector<EvaluatedIndividual> vertices;
    std::uint64_t threshold = 0;
    std::vector<std::uint64_t> delta;       // row-major pairwise distances
    std::vector<std::size_t> component;     // component id per vertex, numbered by first occurrence
    std::size_t component_count = 0;

    std::uint64_t distance(std::size_t i, std::size_t j) const {
        return delta[i * vertices.size() + j];
    }
};

ParetoGraph build_pareto_graph(std::span<const EvaluatedIndividual> front, std::uint64_t k,
                               const GenotypeConfig& cfg);

/// Fraction of vertices that sit in clusters of size >= 2 (0 for an empty graph).
double pconnec(const ParetoGraph& graph);

/// Number of clusters. Singletons count as clusters by default; pass false
/// for the reading that ignores them.
std::size_t nconnec(const ParetoGraph& graph, bool count_singletons = true);

/// Smallest threshold for which the graph is connected: one more than the
/// largest edge on a minimum spanning tree of the complete distance graph.
/// Defined as 0 for fronts with fewer than two members.
std::uint64_t kconnec(std::span<const EvaluatedIndividual> front, const GenotypeConfig& cfg);

/// Vertex count of the largest cluster (0 for an empty graph).
std::size_t lconnec(const ParetoGraph& graph);

/// Hypervolume share of the largest cluster relative to the whole front.
/// Largest cluster by member count; ties broken by larger own hypervolume,
/// then by lowest vertex index. 0 when the front hypervolume is 0.
double hvconnec(const ParetoGraph& graph, const FitnessVector& reference);

/// All eleven metrics of one population state.
struct GenerationSnapshot {
    std::size_t generation = 0;
    double ppos = 0.0;
    double hv = 0.0;
    std::uint64_t maxdiam = 0;
    double avgdiam = 0.0;
    std::uint64_t mindiam = 0;
    double reldiam = 0.0;
    double pconnec = 0.0;
    std::size_t nconnec = 0;
    std::uint64_t kconnec = 0;
    std::size_t lconnec = 0;
    double hvconnec = 0.0;
};

GenerationSnapshot snapshot(std::span<const EvaluatedIndividual> pop, const GenotypeConfig& cfg,
                            std::uint64_t k, const FitnessVector& reference,
                            bool nconnec_count_singletons = true);

/// CSV form; column order is fixed:
/// generation,ppos,hv,maxdiam,avgdiam,mindiam,reldiam,pconnec,nconnec,kconnec,lconnec,hvconnec
std::string snapshot_csv_header();
std::string snapshot_csv_row(const GenerationSnapshot& snap);

}  // namespace tsgen
