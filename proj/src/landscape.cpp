#include "tsgen/landscape.hpp"

#include "tsgen/format.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tsgen {

bool dominates(const FitnessVector& a, const FitnessVector& b) {
    if (a.crashes < b.crashes || a.coverage < b.coverage || a.length > b.length) {
        return false;
    }
    return a.crashes > b.crashes || a.coverage > b.coverage || a.length < b.length;
}

std::vector<std::size_t> pareto_front_indices(std::span<const FitnessVector> fitness) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < fitness.size(); ++j) {
            if (j != i && dominates(fitness[j], fitness[i])) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            front.push_back(i);
        }
    }
    return front;
}

namespace {

std::vector<FitnessVector> fitness_of(std::span<const EvaluatedIndividual> pop) {
    std::vector<FitnessVector> f;
    f.reserve(pop.size());
    for (const EvaluatedIndividual& ind : pop) {
        f.push_back(ind.fitness);
    }
    return f;
}

}  // namespace

std::vector<EvaluatedIndividual> pareto_front(std::span<const EvaluatedIndividual> pop) {
    const std::vector<FitnessVector> fitness = fitness_of(pop);
    std::vector<EvaluatedIndividual> front;
    for (const std::size_t i : pareto_front_indices(fitness)) {
        front.push_back(pop[i]);
    }
    return front;
}

double ppos(std::span<const EvaluatedIndividual> pop) {
    if (pop.empty()) {
        throw std::invalid_argument("ppos: empty population");
    }
    const std::vector<FitnessVector> fitness = fitness_of(pop);
    return static_cast<double>(pareto_front_indices(fitness).size()) /
           static_cast<double>(pop.size());
}

FitnessVector hv_reference(double worst_length) {
    return FitnessVector{0, 0.0, worst_length};
}

double hypervolume(std::span<const FitnessVector> front, const FitnessVector& reference) {
    if (front.empty()) {
        return 0.0;
    }
    // Map into a maximization box anchored at the reference point.
    struct Point {
        double x, y, z;
    };
    std::vector<Point> points;
    points.reserve(front.size());
    for (const FitnessVector& f : front) {
        const double x = static_cast<double>(f.crashes) - static_cast<double>(reference.crashes);
        const double y = f.coverage - reference.coverage;
        const double z = reference.length - f.length;
        if (x < 0.0 || y < 0.0 || z < 0.0) {
            throw std::invalid_argument("hypervolume: point outside the reference box");
        }
        points.push_back({x, y, z});
    }
    // Sweep z from high to low; between consecutive levels the dominated area
    // is the union of the origin-anchored rectangles seen so far.
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        return a.z > b.z;
    });
    std::vector<Point> seen;
    double volume = 0.0;
    std::size_t i = 0;
    while (i < points.size()) {
        const double z = points[i].z;
        while (i < points.size() && points[i].z == z) {
            seen.push_back(points[i]);
            ++i;
        }
        const double z_next = i < points.size() ? points[i].z : 0.0;
        if (z == z_next) {
            continue;
        }
        // Staircase area of the rectangles [0,x] x [0,y].
        std::sort(seen.begin(), seen.end(), [](const Point& a, const Point& b) {
            if (a.x != b.x) {
                return a.x > b.x;
            }
            return a.y > b.y;
        });
        double area = 0.0;
        double y_max = 0.0;
        for (const Point& p : seen) {
            if (p.y > y_max) {
                area += p.x * (p.y - y_max);
                y_max = p.y;
            }
        }
        volume += area * (z - z_next);
    }
    return volume;
}

Diameters diameters(std::span<const EvaluatedIndividual> pop) {
    const std::size_t n = pop.size();
    if (n < 2) {
        throw std::invalid_argument("diameters: need at least two individuals");
    }
    std::uint64_t max_d = 0;
    std::uint64_t min_d = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint64_t d = suite_distance(pop[i].suite, pop[j].suite);
            max_d = std::max(max_d, d);
            min_d = std::min(min_d, d);
            sum += d;
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return Diameters{max_d, static_cast<double>(sum) / pairs, min_d};
}

double reldiam(std::span<const EvaluatedIndividual> pop, const GenotypeConfig& cfg) {
    return diameters(pop).avgdiam / static_cast<double>(max_possible_distance(cfg));
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void merge(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

ParetoGraph build_pareto_graph(std::span<const EvaluatedIndividual> front, std::uint64_t k,
                               const GenotypeConfig& cfg) {
    ParetoGraph graph;
    graph.threshold = k;
    graph.vertices.assign(front.begin(), front.end());
    const std::size_t n = front.size();
    graph.delta.assign(n * n, 0);
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint64_t d = suite_distance(front[i].suite, front[j].suite, cfg);
            graph.delta[i * n + j] = d;
            graph.delta[j * n + i] = d;
            if (d < k) {
                uf.merge(i, j);
            }
        }
    }
    graph.component.resize(n);
    std::vector<std::size_t> label(n, n);
    std::size_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t root = uf.find(v);
        if (label[root] == n) {
            label[root] = next++;
        }
        graph.component[v] = label[root];
    }
    graph.component_count = next;
    return graph;
}

namespace {

std::vector<std::size_t> component_sizes(const ParetoGraph& graph) {
    std::vector<std::size_t> sizes(graph.component_count, 0);
    for (const std::size_t c : graph.component) {
        ++sizes[c];
    }
    return sizes;
}

}  // namespace

double pconnec(const ParetoGraph& graph) {
    if (graph.vertices.empty()) {
        return 0.0;
    }
    const std::vector<std::size_t> sizes = component_sizes(graph);
    std::size_t clustered = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        if (sizes[graph.component[v]] >= 2) {
            ++clustered;
        }
    }
    return static_cast<double>(clustered) / static_cast<double>(graph.vertices.size());
}

std::size_t nconnec(const ParetoGraph& graph, bool count_singletons) {
    if (count_singletons) {
        return graph.component_count;
    }
    std::size_t n = 0;
    for (const std::size_t s : component_sizes(graph)) {
        if (s >= 2) {
            ++n;
        }
    }
    return n;
}

std::uint64_t kconnec(std::span<const EvaluatedIndividual> front, const GenotypeConfig& cfg) {
    const std::size_t n = front.size();
    if (n < 2) {
        return 0;
    }
    // Prim on the complete distance graph; the answer is one more than the
    // largest MST edge (edges require delta strictly below the threshold).
    std::vector<std::uint64_t> best(n, std::numeric_limits<std::uint64_t>::max());
    std::vector<bool> in_tree(n, false);
    best[0] = 0;
    std::uint64_t max_edge = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t v = n;
        for (std::size_t u = 0; u < n; ++u) {
            if (!in_tree[u] && (v == n || best[u] < best[v])) {
                v = u;
            }
        }
        in_tree[v] = true;
        max_edge = std::max(max_edge, best[v]);
        for (std::size_t u = 0; u < n; ++u) {
            if (!in_tree[u]) {
                best[u] = std::min(best[u], suite_distance(front[v].suite, front[u].suite, cfg));
            }
        }
    }
    return max_edge + 1;
}

std::size_t lconnec(const ParetoGraph& graph) {
    const std::vector<std::size_t> sizes = component_sizes(graph);
    return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

double hvconnec(const ParetoGraph& graph, const FitnessVector& reference) {
    if (graph.vertices.empty()) {
        return 0.0;
    }
    std::vector<FitnessVector> all;
    all.reserve(graph.vertices.size());
    for (const EvaluatedIndividual& v : graph.vertices) {
        all.push_back(v.fitness);
    }
    const double total = hypervolume(all, reference);
    if (total <= 0.0) {
        return 0.0;
    }
    const std::vector<std::size_t> sizes = component_sizes(graph);
    const auto members_of = [&](std::size_t c) {
        std::vector<FitnessVector> members;
        for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
            if (graph.component[v] == c) {
                members.push_back(graph.vertices[v].fitness);
            }
        }
        return members;
    };
    // Largest by member count; ties by own hypervolume, then the component
    // appearing first (components are numbered by first vertex occurrence).
    std::size_t best = 0;
    double best_hv = hypervolume(members_of(0), reference);
    for (std::size_t c = 1; c < sizes.size(); ++c) {
        if (sizes[c] < sizes[best]) {
            continue;
        }
        const double c_hv = hypervolume(members_of(c), reference);
        if (sizes[c] > sizes[best] || c_hv > best_hv) {
            best = c;
            best_hv = c_hv;
        }
    }
    return best_hv / total;
}

GenerationSnapshot snapshot(std::span<const EvaluatedIndividual> pop, const GenotypeConfig& cfg,
                            std::uint64_t k, const FitnessVector& reference,
                            bool nconnec_count_singletons) {
    GenerationSnapshot snap;
    const std::vector<EvaluatedIndividual> front = pareto_front(pop);
    std::vector<FitnessVector> front_fitness;
    front_fitness.reserve(front.size());
    for (const EvaluatedIndividual& ind : front) {
        front_fitness.push_back(ind.fitness);
    }
    snap.ppos = ppos(pop);
    snap.hv = hypervolume(front_fitness, reference);
    const Diameters d = diameters(pop);
    snap.maxdiam = d.maxdiam;
    snap.avgdiam = d.avgdiam;
    snap.mindiam = d.mindiam;
    snap.reldiam = d.avgdiam / static_cast<double>(max_possible_distance(cfg));
    const ParetoGraph graph = build_pareto_graph(front, k, cfg);
    snap.pconnec = pconnec(graph);
    snap.nconnec = nconnec(graph, nconnec_count_singletons);
    snap.kconnec = kconnec(front, cfg);
    snap.lconnec = lconnec(graph);
    snap.hvconnec = hvconnec(graph, reference);
    return snap;
}

std::string snapshot_csv_header() {
    return "generation,ppos,hv,maxdiam,avgdiam,mindiam,reldiam,pconnec,nconnec,kconnec,lconnec,"
           "hvconnec";
}

std::string snapshot_csv_row(const GenerationSnapshot& snap) {
    std::string row;
    row += format_u64(snap.generation);
    row += ',';
    row += format_double(snap.ppos);
    row += ',';
    row += format_double(snap.hv);
    row += ',';
    row += format_u64(snap.maxdiam);
    row += ',';
    row += format_double(snap.avgdiam);
    row += ',';
    row += format_u64(snap.mindiam);
    row += ',';
    row += format_double(snap.reldiam);
    row += ',';
    row += format_double(snap.pconnec);
    row += ',';
    row += format_u64(snap.nconnec);
    row += ',';
    row += format_u64(snap.kconnec);
    row += ',';
    row += format_u64(snap.lconnec);
    row += ',';
    row += format_double(snap.hvconnec);
    return row;
}

}  // namespace tsgen
