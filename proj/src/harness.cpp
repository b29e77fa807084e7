#include "tsgen/harness.hpp"

#include "tsgen/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tsgen {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TimedRun {
    RunState state;
    double wall_seconds = 0.0;
};

TimedRun timed_run(const EngineConfig& cfg, const AppModel& app) {
    const auto start = std::chrono::steady_clock::now();
    TimedRun result{run(cfg, app), 0.0};
    const auto stop = std::chrono::steady_clock::now();
    result.wall_seconds = std::chrono::duration<double>(stop - start).count();
    return result;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (repetitions == 0) {
        throw std::invalid_argument("experiment spec: repetitions must be >= 1");
    }
    if (out_dir.empty()) {
        throw std::invalid_argument("experiment spec: output directory required");
    }
    baseline.validate();
    variant.validate();
    const GenotypeConfig& a = baseline.genotype;
    const GenotypeConfig& b = variant.genotype;
    if (a.suite_max != b.suite_max || a.seq_min != b.seq_min || a.seq_max != b.seq_max ||
        a.alphabet_size != b.alphabet_size) {
        throw std::invalid_argument("experiment spec: arms must share the genotype configuration");
    }
}

AppModel load_or_generate_model(const ExperimentSpec& spec) {
    if (spec.model_path) {
        return app_model_from_json(read_file(*spec.model_path));
    }
    return generate_app_model(spec.model.model_seed, spec.model.activity_count,
                              spec.model.statements_per_activity, spec.model.alphabet_size,
                              spec.model.crash_density);
}

void write_run_artifacts(const std::filesystem::path& dir, const RunState& state,
                         const EngineConfig& cfg, double wall_seconds) {
    std::filesystem::create_directories(dir);
    write_file(dir / "telemetry.csv", telemetry_csv(state));
    std::vector<TestSuite> pf;
    pf.reserve(state.archive.size());
    for (const EvaluatedIndividual& ind : state.archive) {
        pf.push_back(ind.suite);
    }
    write_file(dir / "pf.txt", suites_to_text(pf));
    std::vector<TestSuite> pop;
    pop.reserve(state.population.size());
    for (const EvaluatedIndividual& ind : state.population) {
        pop.push_back(ind.suite);
    }
    write_file(dir / "final_population.txt", suites_to_text(pop));
    write_file(dir / "summary.json", summary_json(state, cfg));
    write_file(dir / "timing.log", "wall_seconds=" + format_double(wall_seconds) + "\n");
}

namespace {

double parse_double(const std::string& cell) {
    double value = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("malformed numeric CSV cell: " + cell);
    }
    return value;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::size_t pos = 0;
        for (;;) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(pos));
                break;
            }
            cells.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

void run_landscape_campaign(const ExperimentSpec& spec) {
    spec.validate();
    const AppModel app = load_or_generate_model(spec);
    std::filesystem::create_directories(spec.out_dir);
    write_file(spec.out_dir / "model.json", app_model_to_json(app));

    std::vector<std::string> telemetry_texts;
    for (std::size_t r = 0; r < spec.repetitions; ++r) {
        EngineConfig cfg = spec.baseline;
        cfg.rng_seed = derive_seed(spec.master_seed, engine_config_fingerprint(cfg), r);
        const TimedRun result = timed_run(cfg, app);
        write_run_artifacts(spec.out_dir / ("rep_" + format_u64(r)), result.state, cfg,
                            result.wall_seconds);
        telemetry_texts.push_back(telemetry_csv(result.state));
    }

    // mean.csv: same header as the telemetry, every column averaged per
    // generation across repetitions.
    const std::vector<std::vector<std::string>> first = parse_csv(telemetry_texts[0]);
    const std::size_t rows = first.size();
    const std::size_t cols = first[0].size();
    std::vector<std::vector<double>> sums(rows - 1, std::vector<double>(cols, 0.0));
    for (const std::string& text : telemetry_texts) {
        const std::vector<std::vector<std::string>> table = parse_csv(text);
        if (table.size() != rows) {
            throw std::runtime_error("landscape campaign: repetition row counts differ");
        }
        for (std::size_t i = 1; i < rows; ++i) {
            for (std::size_t c = 0; c < cols; ++c) {
                sums[i - 1][c] += parse_double(table[i][c]);
            }
        }
    }
    std::string mean_csv = first[0][0];
    for (std::size_t c = 1; c < cols; ++c) {
        mean_csv += ',';
        mean_csv += first[0][c];
    }
    mean_csv += '\n';
    for (std::size_t i = 0; i + 1 < rows; ++i) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c != 0) {
                mean_csv += ',';
            }
            mean_csv += format_double(sums[i][c] / static_cast<double>(spec.repetitions));
        }
        mean_csv += '\n';
    }
    write_file(spec.out_dir / "mean.csv", mean_csv);
}

std::string comparison_csv_header() { return "model,metric,a12,effect,h,p,significant"; }

void run_comparison(const ExperimentSpec& spec) {
    spec.validate();
    const AppModel app = load_or_generate_model(spec);
    std::filesystem::create_directories(spec.out_dir);
    write_file(spec.out_dir / "model.json", app_model_to_json(app));

    struct Arm {
        std::string name;
        const EngineConfig* cfg;
        std::vector<RunObservations> observations;
    };
    Arm arms[2] = {{"baseline", &spec.baseline, {}}, {"variant", &spec.variant, {}}};

    for (Arm& arm : arms) {
        for (std::size_t r = 0; r < spec.repetitions; ++r) {
            EngineConfig cfg = *arm.cfg;
            cfg.rng_seed = derive_seed(spec.master_seed, engine_config_fingerprint(cfg), r);
            const TimedRun result = timed_run(cfg, app);
            const std::filesystem::path rep_dir =
                spec.out_dir / arm.name / ("rep_" + format_u64(r));
            write_run_artifacts(rep_dir, result.state, cfg, result.wall_seconds);
            // The comparison consumes the emitted summaries, so the table is
            // reconstructible from the run artifacts alone.
            const nlohmann::json summary =
                nlohmann::json::parse(read_file(rep_dir / "summary.json"));
            RunObservations obs;
            obs.coverage = summary.at("final_coverage").get<double>();
            obs.crashes = summary.at("unique_crashes").get<double>();
            obs.length = summary.at("mean_min_crash_length").is_null()
                             ? -1.0
                             : summary.at("mean_min_crash_length").get<double>();
            obs.time = static_cast<double>(summary.at("executed_events").get<std::uint64_t>());
            arm.observations.push_back(obs);
        }
    }

    const std::string model_id = spec.model_path
                                     ? spec.model_path->stem().string()
                                     : "app-" + format_u64(spec.model.model_seed);
    std::string csv = comparison_csv_header() + "\n";
    const auto metric_row = [&](const std::string& metric, auto selector, bool skip_missing) {
        SampleGroup g_variant{"variant", {}};
        SampleGroup g_baseline{"baseline", {}};
        for (const RunObservations& obs : arms[1].observations) {
            const double v = selector(obs);
            if (!skip_missing || v >= 0.0) {
                g_variant.values.push_back(v);
            }
        }
        for (const RunObservations& obs : arms[0].observations) {
            const double v = selector(obs);
            if (!skip_missing || v >= 0.0) {
                g_baseline.values.push_back(v);
            }
        }
        csv += model_id + ',' + metric + ',';
        if (g_variant.values.empty() || g_baseline.values.empty()) {
            csv += "nan,none,nan,nan,0\n";
            return;
        }
        const ComparisonResult result = compare_groups(metric, g_variant, g_baseline);
        csv += format_double(result.a12) + ',' + effect_label_name(result.effect) + ',' +
               format_double(result.kw_h) + ',' + format_double(result.p_value) + ',' +
               (result.significant ? "1" : "0") + "\n";
    };
    metric_row("coverage", [](const RunObservations& o) { return o.coverage; }, false);
    metric_row("crashes", [](const RunObservations& o) { return o.crashes; }, false);
    metric_row("length", [](const RunObservations& o) { return o.length; }, true);
    metric_row("time", [](const RunObservations& o) { return o.time; }, false);
    write_file(spec.out_dir / "comparison.csv", csv);
}

std::string recompute_snapshot_row(const AppModel& app, std::span<const TestSuite> suites,
                                   const GenotypeConfig& cfg, std::uint64_t k,
                                   std::size_t generation, bool nconnec_count_singletons) {
    std::vector<EvaluatedIndividual> pop;
    pop.reserve(suites.size());
    for (const TestSuite& suite : suites) {
        pop.push_back(EvaluatedIndividual{suite, evaluate(suite, app).fitness});
    }
    GenerationSnapshot snap = snapshot(pop, cfg, k, hv_reference(static_cast<double>(cfg.seq_max)),
                                       nconnec_count_singletons);
    snap.generation = generation;
    return snapshot_csv_row(snap);
}

}  // namespace tsgen
