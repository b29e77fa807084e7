#pragma once

#include "tsgen/engine.hpp"
#include "tsgen/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tsgen {

/// Defaults describe the pinned synthetic app used by the experiment
/// defaults: coarse saturating coverage and a sparse crash table, so that
/// dominance bites early in the search.
struct AppModelParams {
    std::uint64_t model_seed = 7;
    std::size_t activity_count = 8;
    std::size_t statements_per_activity = 8;
    std::uint32_t alphabet_size = 30;
    double crash_density = 0.005;
};

struct ExperimentSpec {
    AppModelParams model{};
    std::optional<std::filesystem::path> model_path;  // pinned model wins over params
    EngineConfig baseline{};                          // also the single-arm config
    EngineConfig variant{};
    std::size_t repetitions = 5;
    std::filesystem::path out_dir;
    std::uint64_t master_seed = 0;

    void validate() const;  // throws std::invalid_argument
};

AppModel load_or_generate_model(const ExperimentSpec& spec);

/// Artifacts of one engine run written under `dir`: telemetry.csv, pf.txt,
/// final_population.txt, summary.json plus timing.log (the only
/// non-deterministic output; wall-clock seconds as plain text).
void write_run_artifacts(const std::filesystem::path& dir, const RunState& state,
                         const EngineConfig& cfg, double wall_seconds);

/// Runs the single-arm configuration for every repetition with derived
/// seeds. Emits rep_<r>/ run artifacts, the pinned model as model.json and
/// mean.csv averaging every telemetry column across repetitions.
void run_landscape_campaign(const ExperimentSpec& spec);

/// Per-run observations collected for the comparison study.
struct RunObservations {
    double coverage = 0.0;
    double crashes = 0.0;
    double length = -1.0;  // mean minimal revealing length; < 0 when no crash
    double time = 0.0;     // executed events (deterministic cost proxy)
};

/// Runs both arms for the configured repetitions, emits per-run artifacts
/// under baseline/ and variant/, and comparison.csv with one row per metric
/// (coverage, crashes, length, time) comparing variant against baseline.
void run_comparison(const ExperimentSpec& spec);

/// Recomputes the snapshot row for an archived population: suites are
/// re-evaluated against the model and the metrics recomputed.
std::string recompute_snapshot_row(const AppModel& app, std::span<const TestSuite> suites,
                                   const GenotypeConfig& cfg, std::uint64_t k,
                                   std::size_t generation, bool nconnec_count_singletons = true);

std::string comparison_csv_header();

}  // namespace tsgen
