// Command-line front end: app model generation, single engine runs,
// landscape campaigns, A/B comparisons and snapshot recomputation.

#include "tsgen/engine.hpp"
#include "tsgen/format.hpp"
#include "tsgen/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace tsgen;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MechanismToggles parse_mechanisms(const std::string& text) {
    if (text == "all") {
        return MechanismToggles::all();
    }
    if (text == "none") {
        return MechanismToggles::none();
    }
    MechanismToggles toggles;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string name =
            text.substr(pos, comma == std::string::npos ? text.size() - pos : comma - pos);
        if (name == "diverse_init") {
            toggles.diverse_init = true;
        } else if (name == "adaptive_control") {
            toggles.adaptive_control = true;
        } else if (name == "duplicate_elim") {
            toggles.duplicate_elim = true;
        } else if (name == "hybrid_selection") {
            toggles.hybrid_selection = true;
        } else {
            throw std::invalid_argument("unknown mechanism: " + name);
        }
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return toggles;
}

struct CommonOptions {
    std::uint64_t seed = 0;
    std::optional<std::size_t> generations;
    std::size_t pop_size = 50;
    std::size_t off_size = 50;
    std::uint64_t k = 300;
    double div_limit = 0.5;
    std::size_t n_div = 15;
    std::size_t size_init = 100;
    std::string mechanisms = "none";
    double crossover = 0.7;
    double mutation = 0.3;
    bool nconnec_excl_singletons = false;
    std::size_t suite_size = 5;
    std::size_t seq_min = 20;
    std::size_t seq_max = 500;

    std::string app_path;
    AppModelParams model;
};

void add_engine_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--seed", opt.seed, "Master seed");
    cmd->add_option("--generations", opt.generations, "Generations to run");
    cmd->add_option("--pop-size", opt.pop_size, "Population size");
    cmd->add_option("--off-size", opt.off_size, "Offspring size");
    cmd->add_option("--k", opt.k, "Connectedness threshold");
    cmd->add_option("--div-limit", opt.div_limit, "Adaptive diversity threshold in [0,1]");
    cmd->add_option("--n-div", opt.n_div, "Distant solutions kept by hybrid selection");
    cmd->add_option("--size-init", opt.size_init, "Size of the large initial population");
    cmd->add_option("--mechanisms", opt.mechanisms,
                    "all | none | comma list of diverse_init,adaptive_control,duplicate_elim,"
                    "hybrid_selection");
    cmd->add_option("--crossover", opt.crossover, "Crossover probability");
    cmd->add_option("--mutation", opt.mutation, "Mutation probability");
    cmd->add_option("--suite-size", opt.suite_size, "Sequences per test suite");
    cmd->add_option("--seq-min", opt.seq_min, "Minimum sequence length");
    cmd->add_option("--seq-max", opt.seq_max, "Maximum sequence length");
    cmd->add_flag("--nconnec-excl-singletons", opt.nconnec_excl_singletons,
                  "Count only clusters of two or more in nconnec");
}

void add_model_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--app", opt.app_path, "Pinned app model JSON (overrides model flags)");
    cmd->add_option("--model-seed", opt.model.model_seed, "App model seed");
    cmd->add_option("--activities", opt.model.activity_count, "Activity count");
    cmd->add_option("--statements", opt.model.statements_per_activity, "Statements per activity");
    cmd->add_option("--alphabet", opt.model.alphabet_size, "Event alphabet size");
    cmd->add_option("--crash-density", opt.model.crash_density, "Crash trigger probability");
}

EngineConfig engine_config(const CommonOptions& opt, std::size_t default_generations) {
    EngineConfig cfg;
    cfg.size_pop = opt.pop_size;
    cfg.size_off = opt.off_size;
    cfg.g_max = opt.generations.value_or(default_generations);
    cfg.vcfg = VariationConfig{opt.crossover, opt.mutation};
    cfg.size_init = opt.size_init;
    cfg.div_limit = opt.div_limit;
    cfg.n_div = opt.n_div;
    cfg.mechanisms = parse_mechanisms(opt.mechanisms);
    cfg.rng_seed = opt.seed;
    cfg.genotype = GenotypeConfig{opt.suite_size, opt.seq_min, opt.seq_max, 0, opt.seed};
    cfg.k_threshold = opt.k;
    cfg.nconnec_count_singletons = !opt.nconnec_excl_singletons;
    return cfg;
}

ExperimentSpec experiment_spec(const CommonOptions& opt, const std::string& out,
                               std::size_t repetitions, std::size_t default_generations) {
    ExperimentSpec spec;
    spec.model = opt.model;
    if (!opt.app_path.empty()) {
        spec.model_path = opt.app_path;
    }
    spec.baseline = engine_config(opt, default_generations);
    spec.variant = spec.baseline;
    spec.repetitions = repetitions;
    spec.out_dir = out;
    spec.master_seed = opt.seed;
    return spec;
}

AppModel load_model(const CommonOptions& opt) {
    if (!opt.app_path.empty()) {
        return app_model_from_json(read_file(opt.app_path));
    }
    return generate_app_model(opt.model.model_seed, opt.model.activity_count,
                              opt.model.statements_per_activity, opt.model.alphabet_size,
                              opt.model.crash_density);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective evolutionary test-suite search toolkit"};
    app.require_subcommand(1);

    // gen-app
    CommonOptions gen_opt;
    std::string gen_out = "app.json";
    CLI::App* gen = app.add_subcommand("gen-app", "Emit a pinned app model file");
    add_model_options(gen, gen_opt);
    gen->add_option("--out", gen_out, "Output file");

    // run
    CommonOptions run_opt;
    std::string run_out = "run_out";
    CLI::App* run_cmd = app.add_subcommand("run", "Single engine run");
    add_engine_options(run_cmd, run_opt);
    add_model_options(run_cmd, run_opt);
    run_cmd->add_option("--out", run_out, "Output directory");

    // landscape
    CommonOptions land_opt;
    std::string land_out = "landscape_out";
    std::size_t land_reps = 5;
    CLI::App* land = app.add_subcommand("landscape", "Landscape-analysis campaign");
    add_engine_options(land, land_opt);
    add_model_options(land, land_opt);
    land->add_option("--reps", land_reps, "Repetitions");
    land->add_option("--out", land_out, "Output directory");

    // compare
    CommonOptions cmp_opt;
    std::string cmp_out = "compare_out";
    std::size_t cmp_reps = 20;
    CLI::App* cmp = app.add_subcommand("compare", "Baseline vs diversity-variant A/B comparison");
    add_engine_options(cmp, cmp_opt);
    add_model_options(cmp, cmp_opt);
    cmp->add_option("--reps", cmp_reps, "Repetitions per arm");
    cmp->add_option("--out", cmp_out, "Output directory");

    // metrics
    CommonOptions met_opt;
    std::string met_population;
    std::size_t met_generation = 0;
    std::string met_out;
    CLI::App* met = app.add_subcommand("metrics", "Recompute a snapshot row from an archive");
    add_engine_options(met, met_opt);
    add_model_options(met, met_opt);
    met->add_option("--population", met_population, "Archived population file")->required();
    met->add_option("--generation", met_generation, "Generation label for the row");
    met->add_option("--out", met_out, "Output file (stdout when omitted)");

    try {
        app.parse(argc, argv);

        if (*gen) {
            const AppModel model =
                generate_app_model(gen_opt.model.model_seed, gen_opt.model.activity_count,
                                   gen_opt.model.statements_per_activity,
                                   gen_opt.model.alphabet_size, gen_opt.model.crash_density);
            std::ofstream out(gen_out, std::ios::binary);
            if (!out) {
                throw std::invalid_argument("cannot open: " + gen_out);
            }
            out << app_model_to_json(model);
            std::cerr << "wrote " << gen_out << "\n";
        } else if (*run_cmd) {
            const AppModel model = load_model(run_opt);
            const EngineConfig cfg = engine_config(run_opt, 40);
            const auto start = std::chrono::steady_clock::now();
            const RunState state = run(cfg, model);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_run_artifacts(run_out, state, cfg, seconds);
            std::cerr << "run finished: " << state.generation << " generations, "
                      << state.archive.size() << " front members, wall "
                      << format_double(seconds) << " s\n";
        } else if (*land) {
            ExperimentSpec spec = experiment_spec(land_opt, land_out, land_reps, 40);
            run_landscape_campaign(spec);
            std::cerr << "landscape campaign written to " << land_out << "\n";
        } else if (*cmp) {
            ExperimentSpec spec = experiment_spec(cmp_opt, cmp_out, cmp_reps, 10);
            spec.baseline.mechanisms = MechanismToggles::none();
            spec.variant.mechanisms = MechanismToggles::all();
            run_comparison(spec);
            std::cerr << "comparison written to " << cmp_out << "\n";
        } else if (*met) {
            const AppModel model = load_model(met_opt);
            const std::vector<TestSuite> suites = parse_suites(read_file(met_population));
            GenotypeConfig gcfg{met_opt.suite_size, met_opt.seq_min, met_opt.seq_max,
                                model.alphabet_size, 0};
            const std::string row =
                recompute_snapshot_row(model, suites, gcfg, met_opt.k, met_generation,
                                       !met_opt.nconnec_excl_singletons);
            const std::string text = snapshot_csv_header() + "\n" + row + "\n";
            if (met_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(met_out, std::ios::binary);
                if (!out) {
                    throw std::invalid_argument("cannot open: " + met_out);
                }
                out << text;
            }
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
