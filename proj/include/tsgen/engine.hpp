#pragma once

#include "tsgen/landscape.hpp"
#include "tsgen/sut.hpp"
#include "tsgen/variation.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tsgen {

/// The four diversity-promoting mechanisms, toggleable individually. With
/// all four off the engine is a plain NSGA-II.
struct MechanismToggles {
    bool diverse_init = false;
    bool adaptive_control = false;
    bool duplicate_elim = false;
    bool hybrid_selection = false;

    static MechanismToggles all() { return {true, true, true, true}; }
    static MechanismToggles none() { return {}; }
};

struct EngineConfig {
    std::size_t size_pop = 50;
    std::size_t size_off = 50;
    std::size_t g_max = 40;
    VariationConfig vcfg{};
    std::size_t size_init = 100;
    double div_limit = 0.5;
    std::size_t n_div = 15;
    MechanismToggles mechanisms{};
    std::uint64_t rng_seed = 0;

    /// Representation parameters. alphabet_size 0 means "take it from the
    /// app model"; a nonzero value must match the model.
    GenotypeConfig genotype{.suite_max = 5, .seq_min = 20, .seq_max = 500, .alphabet_size = 0};

    /// Connectedness threshold for per-generation snapshots.
    std::uint64_t k_threshold = 300;
    bool nconnec_count_singletons = true;

    void validate() const;  // throws std::invalid_argument
};

/// Optional introspection hooks for contract verification. Observers must
/// not mutate anything; all spans are views into engine-owned storage.
struct EngineHooks {
    /// Candidate pool right before selection (after duplicate elimination
    /// and refilling when those apply). Not called on restart generations.
    std::function<void(std::span<const TestSuite>)> selection_pool;

    /// Every select_most_distant call: pool view, requested count and the
    /// chosen indices in selection order.
    std::function<void(std::span<const TestSuite>, std::size_t, std::span<const std::size_t>)>
        most_distant_call;

    /// Hybrid selection composition: pool indices of the sorted order, the
    /// best slice, the distant slice and the final population.
    std::function<void(std::span<const std::size_t>, std::span<const std::size_t>,
                       std::span<const std::size_t>, std::span<const std::size_t>)>
        hybrid_selection;

    /// Archive contents right after each generation is recorded.
    std::function<void(std::span<const EvaluatedIndividual>)> archive_snapshot;
};

struct RunState {
    std::vector<EvaluatedIndividual> population;
    std::vector<EvaluatedIndividual> archive;  // all-time non-dominated set
    std::vector<CrashReport> crash_log;
    double div_init = 0.0;
    std::vector<GenerationSnapshot> snapshots;   // one per generation, incl. generation 0
    std::vector<std::uint8_t> restart_flags;     // aligned with snapshots; flag 0 is always 0
    std::vector<double> archive_hv;              // archive hypervolume per generation
    std::size_t generation = 0;
    std::uint64_t executed_events = 0;           // deterministic execution-cost counter
    std::uint64_t evaluations = 0;
    Rng rng;
    GenotypeConfig genotype;                     // resolved against the app model
};

/// Build the initial state: a diverse or plain random population, evaluated,
/// with the generation-0 snapshot and the initial diversity recorded.
RunState initialize(const EngineConfig& cfg, const AppModel& app,
                    const EngineHooks* hooks = nullptr);

/// One full generation. Requires state.generation < cfg.g_max.
void step(RunState& state, const EngineConfig& cfg, const AppModel& app,
          const EngineHooks* hooks = nullptr);

/// initialize + step until g_max generations; g_max + 1 snapshots in total.
RunState run(const EngineConfig& cfg, const AppModel& app, const EngineHooks* hooks = nullptr);

/// Fast non-dominated sorting: front 0 is the Pareto front of the pool,
/// front i+1 the front of the remainder. Indices keep input order.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const FitnessVector> pool);

/// Standard NSGA-II crowding distance over one front: boundary members per
/// objective get infinity, interior members accumulate normalized neighbor
/// gaps, objectives with zero range contribute nothing. Equal values are
/// ordered by index.
std::vector<double> crowding_distance(std::span<const FitnessVector> front);

/// Canonical one-line description of everything that shapes a run. Serves
/// as the arm identifier for seed derivation, so identically configured
/// arms replay identical runs.
std::string engine_config_fingerprint(const EngineConfig& cfg);

/// Telemetry CSV: the snapshot columns plus the restart branch flag.
std::string telemetry_csv_header();
std::string telemetry_csv(const RunState& state);

/// Run summary JSON: final coverage, distinct crash ids with their minimal
/// revealing lengths, and the deterministic executed-event counter.
std::string summary_json(const RunState& state, const EngineConfig& cfg);

/// Mean of the per-crash minimal revealing prefix lengths; negative when the
/// run triggered no crash.
double mean_min_crash_length(const RunState& state);

}  // namespace tsgen
