#include "tsgen/engine.hpp"

#include "tsgen/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace tsgen {

void EngineConfig::validate() const {
    if (size_pop < 2) {
        throw std::invalid_argument("engine config: size_pop must be >= 2");
    }
    if (size_off == 0) {
        throw std::invalid_argument("engine config: size_off must be >= 1");
    }
    if (size_init < size_pop) {
        throw std::invalid_argument("engine config: size_init must be >= size_pop");
    }
    if (div_limit < 0.0 || div_limit > 1.0) {
        throw std::invalid_argument("engine config: div_limit must be in [0,1]");
    }
    if (n_div >= size_pop) {
        throw std::invalid_argument("engine config: n_div must be < size_pop");
    }
    vcfg.validate();
    GenotypeConfig g = genotype;
    if (g.alphabet_size == 0) {
        g.alphabet_size = 1;  // resolved from the app model later
    }
    g.validate();
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const FitnessVector> pool) {
    const std::size_t n = pool.size();
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> dominated(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(pool[i], pool[j])) {
                dominated[i].push_back(j);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (const std::size_t j : dominated[i]) {
            ++domination_count[j];
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (const std::size_t i : current) {
            for (const std::size_t j : dominated[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(std::span<const FitnessVector> front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) {
        return std::vector<double>(n, inf);
    }
    std::vector<double> crowd(n, 0.0);
    const auto objective = [&](std::size_t obj, std::size_t i) -> double {
        switch (obj) {
            case 0: return static_cast<double>(front[i].crashes);
            case 1: return front[i].coverage;
            default: return front[i].length;
        }
    };
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < 3; ++obj) {
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = objective(obj, a);
            const double vb = objective(obj, b);
            if (va != vb) {
                return va < vb;
            }
            return a < b;
        });
        const double lo = objective(obj, order.front());
        const double hi = objective(obj, order.back());
        if (hi == lo) {
            continue;
        }
        crowd[order.front()] = inf;
        crowd[order.back()] = inf;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            crowd[order[k]] +=
                (objective(obj, order[k + 1]) - objective(obj, order[k - 1])) / (hi - lo);
        }
    }
    return crowd;
}

namespace {

GenotypeConfig resolved_genotype(const EngineConfig& cfg, const AppModel& app) {
    GenotypeConfig g = cfg.genotype;
    if (g.alphabet_size == 0) {
        g.alphabet_size = app.alphabet_size;
    } else if (g.alphabet_size != app.alphabet_size) {
        throw std::invalid_argument("engine: genotype alphabet does not match the app model");
    }
    g.validate();
    return g;
}

void archive_insert(std::vector<EvaluatedIndividual>& archive, const EvaluatedIndividual& cand) {
    for (const EvaluatedIndividual& member : archive) {
        if (member.fitness == cand.fitness || dominates(member.fitness, cand.fitness)) {
            return;
        }
    }
    std::erase_if(archive, [&](const EvaluatedIndividual& member) {
        return dominates(cand.fitness, member.fitness);
    });
    archive.push_back(cand);
}

EvaluatedIndividual evaluate_into(RunState& state, TestSuite suite, const AppModel& app) {
    EvalOutcome outcome = evaluate(suite, app);
    state.executed_events += static_cast<std::uint64_t>(std::llround(
        outcome.fitness.length * static_cast<double>(suite.sequences.size())));
    for (CrashReport& report : outcome.reports) {
        report.suite_index = state.evaluations;
        state.crash_log.push_back(report);
    }
    ++state.evaluations;
    EvaluatedIndividual ind{std::move(suite), outcome.fitness};
    archive_insert(state.archive, ind);
    return ind;
}

double archive_hypervolume(const RunState& state) {
    std::vector<FitnessVector> fitness;
    fitness.reserve(state.archive.size());
    for (const EvaluatedIndividual& ind : state.archive) {
        fitness.push_back(ind.fitness);
    }
    return hypervolume(fitness, hv_reference(static_cast<double>(state.genotype.seq_max)));
}

void record_generation(RunState& state, const EngineConfig& cfg, bool restarted,
                       const EngineHooks* hooks) {
    GenerationSnapshot snap =
        snapshot(state.population, state.genotype, cfg.k_threshold,
                 hv_reference(static_cast<double>(state.genotype.seq_max)),
                 cfg.nconnec_count_singletons);
    snap.generation = state.generation;
    state.snapshots.push_back(snap);
    state.restart_flags.push_back(restarted ? 1 : 0);
    state.archive_hv.push_back(archive_hypervolume(state));
    if (hooks && hooks->archive_snapshot) {
        hooks->archive_snapshot(state.archive);
    }
}

std::vector<std::size_t> notify_most_distant(const EngineHooks* hooks,
                                             std::span<const TestSuite> pool, std::size_t count) {
    std::vector<std::size_t> picked = select_most_distant_indices(pool, count);
    if (hooks && hooks->most_distant_call) {
        hooks->most_distant_call(pool, count, picked);
    }
    return picked;
}

std::vector<TestSuite> suites_of(std::span<const EvaluatedIndividual> pop) {
    std::vector<TestSuite> suites;
    suites.reserve(pop.size());
    for (const EvaluatedIndividual& ind : pop) {
        suites.push_back(ind.suite);
    }
    return suites;
}

/// Pool indices ordered by (rank asc, crowding desc, index asc); crowding is
/// assigned per front.
std::vector<std::size_t> crowded_order(std::span<const FitnessVector> pool) {
    const std::vector<std::vector<std::size_t>> fronts = non_dominated_sort(pool);
    std::vector<std::size_t> order;
    order.reserve(pool.size());
    std::vector<FitnessVector> front_fitness;
    for (const std::vector<std::size_t>& front : fronts) {
        front_fitness.clear();
        for (const std::size_t i : front) {
            front_fitness.push_back(pool[i]);
        }
        const std::vector<double> crowd = crowding_distance(front_fitness);
        std::vector<std::size_t> local(front.size());
        for (std::size_t k = 0; k < front.size(); ++k) {
            local[k] = k;
        }
        std::sort(local.begin(), local.end(), [&](std::size_t a, std::size_t b) {
            if (crowd[a] != crowd[b]) {
                return crowd[a] > crowd[b];
            }
            return front[a] < front[b];
        });
        for (const std::size_t k : local) {
            order.push_back(front[k]);
        }
    }
    return order;
}

std::vector<SelectionKey> selection_keys(std::span<const FitnessVector> pool) {
    const std::vector<std::vector<std::size_t>> fronts = non_dominated_sort(pool);
    std::vector<SelectionKey> keys(pool.size());
    std::vector<FitnessVector> front_fitness;
    for (std::size_t rank = 0; rank < fronts.size(); ++rank) {
        front_fitness.clear();
        for (const std::size_t i : fronts[rank]) {
            front_fitness.push_back(pool[i]);
        }
        const std::vector<double> crowd = crowding_distance(front_fitness);
        for (std::size_t k = 0; k < fronts[rank].size(); ++k) {
            keys[fronts[rank][k]] = SelectionKey{rank, crowd[k]};
        }
    }
    return keys;
}

}  // namespace

RunState initialize(const EngineConfig& cfg, const AppModel& app, const EngineHooks* hooks) {
    cfg.validate();
    app.validate();
    RunState state;
    state.genotype = resolved_genotype(cfg, app);
    state.rng = Rng(cfg.rng_seed);

    std::vector<TestSuite> initial;
    if (cfg.mechanisms.diverse_init) {
        std::vector<TestSuite> large;
        large.reserve(cfg.size_init);
        for (std::size_t i = 0; i < cfg.size_init; ++i) {
            large.push_back(random_suite(state.genotype, state.rng));
        }
        for (const std::size_t i : notify_most_distant(hooks, large, cfg.size_pop)) {
            initial.push_back(large[i]);
        }
    } else {
        initial.reserve(cfg.size_pop);
        for (std::size_t i = 0; i < cfg.size_pop; ++i) {
            initial.push_back(random_suite(state.genotype, state.rng));
        }
    }

    state.population.reserve(cfg.size_pop);
    for (TestSuite& suite : initial) {
        state.population.push_back(evaluate_into(state, std::move(suite), app));
    }
    state.div_init = diameters(state.population).avgdiam;
    record_generation(state, cfg, false, hooks);
    return state;
}

void step(RunState& state, const EngineConfig& cfg, const AppModel& app, const EngineHooks* hooks) {
    if (state.generation >= cfg.g_max) {
        throw std::invalid_argument("step: run already reached g_max");
    }
    const double div_pop = diameters(state.population).avgdiam;
    const bool restart =
        cfg.mechanisms.adaptive_control && div_pop <= cfg.div_limit * state.div_init;

    if (restart) {
        // Fresh offspring generated like an initial population, then a purely
        // distance-based selection over parents and offspring.
        std::vector<EvaluatedIndividual> pool = state.population;
        for (std::size_t i = 0; i < cfg.size_off; ++i) {
            pool.push_back(evaluate_into(state, random_suite(state.genotype, state.rng), app));
        }
        const std::vector<TestSuite> pool_suites = suites_of(pool);
        std::vector<EvaluatedIndividual> next;
        next.reserve(cfg.size_pop);
        for (const std::size_t i : notify_most_distant(hooks, pool_suites, cfg.size_pop)) {
            next.push_back(pool[i]);
        }
        state.population = std::move(next);
    } else {
        std::vector<FitnessVector> parent_fitness;
        parent_fitness.reserve(state.population.size());
        for (const EvaluatedIndividual& ind : state.population) {
            parent_fitness.push_back(ind.fitness);
        }
        const std::vector<SelectionKey> keys = selection_keys(parent_fitness);
        const std::vector<TestSuite> parent_suites = suites_of(state.population);
        std::vector<TestSuite> children =
            whole_suite_variation(parent_suites, keys, cfg.size_off, cfg.vcfg, state.rng);

        std::vector<EvaluatedIndividual> pool = state.population;
        pool.reserve(state.population.size() + children.size());
        for (TestSuite& child : children) {
            pool.push_back(evaluate_into(state, std::move(child), app));
        }

        if (cfg.mechanisms.duplicate_elim) {
            // Keep the first occurrence in parents-then-offspring order.
            std::vector<EvaluatedIndividual> unique;
            unique.reserve(pool.size());
            for (EvaluatedIndividual& cand : pool) {
                bool duplicate = false;
                for (const EvaluatedIndividual& kept : unique) {
                    if (suite_distance(kept.suite, cand.suite) == 0) {
                        duplicate = true;
                        break;
                    }
                }
                if (!duplicate) {
                    unique.push_back(std::move(cand));
                }
            }
            pool = std::move(unique);
            // Degenerate case: elimination can leave fewer candidates than
            // the population needs; refill with fresh non-duplicate suites.
            while (pool.size() < cfg.size_pop) {
                TestSuite fresh = random_suite(state.genotype, state.rng);
                bool duplicate = false;
                for (const EvaluatedIndividual& kept : pool) {
                    if (suite_distance(kept.suite, fresh) == 0) {
                        duplicate = true;
                        break;
                    }
                }
                if (!duplicate) {
                    pool.push_back(evaluate_into(state, std::move(fresh), app));
                }
            }
        }

        const std::vector<TestSuite> pool_suites = suites_of(pool);
        if (hooks && hooks->selection_pool) {
            hooks->selection_pool(pool_suites);
        }

        std::vector<FitnessVector> pool_fitness;
        pool_fitness.reserve(pool.size());
        for (const EvaluatedIndividual& ind : pool) {
            pool_fitness.push_back(ind.fitness);
        }
        const std::vector<std::size_t> sorted = crowded_order(pool_fitness);

        std::vector<std::size_t> final_indices;
        if (cfg.mechanisms.hybrid_selection && cfg.n_div > 0) {
            const std::size_t best_count = cfg.size_pop - cfg.n_div;
            const std::vector<std::size_t> best(sorted.begin(), sorted.begin() + best_count);
            const std::vector<std::size_t> distant =
                notify_most_distant(hooks, pool_suites, cfg.n_div);
            // The distant slice may overlap the best slice; deduplicate by
            // pool identity and refill from the next-best sorted entries.
            std::vector<bool> in_final(pool.size(), false);
            final_indices = best;
            for (const std::size_t i : best) {
                in_final[i] = true;
            }
            for (const std::size_t i : distant) {
                if (!in_final[i]) {
                    in_final[i] = true;
                    final_indices.push_back(i);
                }
            }
            for (std::size_t k = best_count; final_indices.size() < cfg.size_pop; ++k) {
                const std::size_t i = sorted[k];
                if (!in_final[i]) {
                    in_final[i] = true;
                    final_indices.push_back(i);
                }
            }
            if (hooks && hooks->hybrid_selection) {
                hooks->hybrid_selection(sorted, best, distant, final_indices);
            }
        } else {
            final_indices.assign(sorted.begin(), sorted.begin() + cfg.size_pop);
        }

        std::vector<EvaluatedIndividual> next;
        next.reserve(cfg.size_pop);
        for (const std::size_t i : final_indices) {
            next.push_back(pool[i]);
        }
        state.population = std::move(next);
    }

    ++state.generation;
    record_generation(state, cfg, restart, hooks);
}

RunState run(const EngineConfig& cfg, const AppModel& app, const EngineHooks* hooks) {
    RunState state = initialize(cfg, app, hooks);
    while (state.generation < cfg.g_max) {
        step(state, cfg, app, hooks);
    }
    return state;
}

std::string engine_config_fingerprint(const EngineConfig& cfg) {
    std::string s;
    s += "pop=" + format_u64(cfg.size_pop);
    s += ";off=" + format_u64(cfg.size_off);
    s += ";g=" + format_u64(cfg.g_max);
    s += ";p=" + format_double(cfg.vcfg.crossover_prob);
    s += ";q=" + format_double(cfg.vcfg.mutation_prob);
    s += ";init=" + format_u64(cfg.size_init);
    s += ";dl=" + format_double(cfg.div_limit);
    s += ";nd=" + format_u64(cfg.n_div);
    s += ";m=";
    s += cfg.mechanisms.diverse_init ? '1' : '0';
    s += cfg.mechanisms.adaptive_control ? '1' : '0';
    s += cfg.mechanisms.duplicate_elim ? '1' : '0';
    s += cfg.mechanisms.hybrid_selection ? '1' : '0';
    s += ";suite=" + format_u64(cfg.genotype.suite_max);
    s += ";seq=" + format_u64(cfg.genotype.seq_min) + "-" + format_u64(cfg.genotype.seq_max);
    s += ";k=" + format_u64(cfg.k_threshold);
    return s;
}

std::string telemetry_csv_header() { return snapshot_csv_header() + ",restart"; }

std::string telemetry_csv(const RunState& state) {
    std::string out = telemetry_csv_header() + "\n";
    for (std::size_t g = 0; g < state.snapshots.size(); ++g) {
        out += snapshot_csv_row(state.snapshots[g]);
        out += ',';
        out += state.restart_flags[g] ? '1' : '0';
        out += '\n';
    }
    return out;
}

double mean_min_crash_length(const RunState& state) {
    std::map<std::uint32_t, std::size_t> min_lengths;
    for (const CrashReport& report : state.crash_log) {
        const auto it = min_lengths.find(report.crash_id);
        if (it == min_lengths.end() || report.revealing_prefix_length < it->second) {
            min_lengths[report.crash_id] = report.revealing_prefix_length;
        }
    }
    if (min_lengths.empty()) {
        return -1.0;
    }
    double sum = 0.0;
    for (const auto& [id, len] : min_lengths) {
        sum += static_cast<double>(len);
    }
    return sum / static_cast<double>(min_lengths.size());
}

std::string summary_json(const RunState& state, const EngineConfig& cfg) {
    std::map<std::uint32_t, std::size_t> min_lengths;
    for (const CrashReport& report : state.crash_log) {
        const auto it = min_lengths.find(report.crash_id);
        if (it == min_lengths.end() || report.revealing_prefix_length < it->second) {
            min_lengths[report.crash_id] = report.revealing_prefix_length;
        }
    }
    double best_coverage = 0.0;
    for (const EvaluatedIndividual& ind : state.archive) {
        best_coverage = std::max(best_coverage, ind.fitness.coverage);
    }
    nlohmann::json j;
    j["version"] = 1;
    j["seed"] = cfg.rng_seed;
    j["generations"] = state.generation;
    j["final_coverage"] = best_coverage;
    j["unique_crashes"] = min_lengths.size();
    nlohmann::json lengths = nlohmann::json::object();
    for (const auto& [id, len] : min_lengths) {
        lengths[format_u64(id)] = len;
    }
    j["crash_min_lengths"] = std::move(lengths);
    const double mean_len = mean_min_crash_length(state);
    if (mean_len < 0.0) {
        j["mean_min_crash_length"] = nullptr;
    } else {
        j["mean_min_crash_length"] = mean_len;
    }
    j["executed_events"] = state.executed_events;
    j["pareto_front_size"] = state.archive.size();
    return j.dump(2) + "\n";
}

}  // namespace tsgen
