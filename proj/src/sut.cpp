#include "tsgen/sut.hpp"

#include "tsgen/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace tsgen {

namespace {

// Inclusion probability for the per-(activity, event) statement subsets.
constexpr double kStatementBitProbability = 0.2;
constexpr double kTransitionProbability = 0.5;

}  // namespace

void AppModel::validate() const {
    if (activity_count == 0 || statements_per_activity == 0 || alphabet_size == 0) {
        throw std::invalid_argument("app model: counts must be >= 1");
    }
    const std::size_t pairs = activity_count * alphabet_size;
    if (transitions.size() != pairs || crash_ids.size() != pairs ||
        statement_marks.size() != pairs) {
        throw std::invalid_argument("app model: table sizes do not match activity/alphabet counts");
    }
    std::unordered_set<std::uint32_t> seen;
    for (std::size_t p = 0; p < pairs; ++p) {
        const std::uint32_t t = transitions[p];
        if (t != kNoTransition && t >= activity_count) {
            throw std::invalid_argument("app model: transition target out of range");
        }
        const std::uint32_t c = crash_ids[p];
        if (c != 0 && !seen.insert(c).second) {
            throw std::invalid_argument("app model: duplicate crash id");
        }
        for (const std::uint32_t s : statement_marks[p]) {
            if (s >= statements_per_activity) {
                throw std::invalid_argument("app model: statement index out of range");
            }
        }
    }
}

AppModel generate_app_model(std::uint64_t model_seed, std::size_t activity_count,
                            std::size_t statements_per_activity, std::uint32_t alphabet_size,
                            double crash_density) {
    if (activity_count == 0 || statements_per_activity == 0 || alphabet_size == 0) {
        throw std::invalid_argument("generate_app_model: counts must be >= 1");
    }
    if (crash_density < 0.0 || crash_density > 1.0) {
        throw std::invalid_argument("generate_app_model: crash_density must be in [0,1]");
    }
    AppModel app;
    app.activity_count = activity_count;
    app.statements_per_activity = statements_per_activity;
    app.alphabet_size = alphabet_size;
    app.model_seed = model_seed;
    const std::size_t pairs = activity_count * alphabet_size;
    app.transitions.assign(pairs, AppModel::kNoTransition);
    app.crash_ids.assign(pairs, 0);
    app.statement_marks.resize(pairs);

    Rng rng(model_seed);
    std::uint32_t next_crash_id = 1;
    for (std::size_t p = 0; p < pairs; ++p) {
        if (uniform01(rng) < kTransitionProbability) {
            app.transitions[p] = static_cast<std::uint32_t>(uniform_below(rng, activity_count));
        }
        if (uniform01(rng) < crash_density) {
            app.crash_ids[p] = next_crash_id++;
        }
        for (std::size_t s = 0; s < statements_per_activity; ++s) {
            if (uniform01(rng) < kStatementBitProbability) {
                app.statement_marks[p].push_back(static_cast<std::uint32_t>(s));
            }
        }
    }
    return app;
}

EvalOutcome evaluate(const TestSuite& suite, const AppModel& app) {
    EvalOutcome out;
    std::vector<char> covered(app.total_statements(), 0);
    std::size_t covered_count = 0;
    std::unordered_set<std::uint32_t> distinct_crashes;
    std::uint64_t executed_total = 0;

    for (std::size_t si = 0; si < suite.sequences.size(); ++si) {
        std::size_t activity = 0;
        std::size_t executed = 0;
        for (const Event e : suite.sequences[si]) {
            if (e >= app.alphabet_size) {
                throw std::invalid_argument("evaluate: event id outside the model alphabet");
            }
            ++executed;
            const std::size_t p = app.pair_index(activity, e);
            for (const std::uint32_t s : app.statement_marks[p]) {
                const std::size_t global = activity * app.statements_per_activity + s;
                if (!covered[global]) {
                    covered[global] = 1;
                    ++covered_count;
                }
            }
            const std::uint32_t crash = app.crash_ids[p];
            if (crash != 0) {
                out.reports.push_back(CrashReport{crash, executed, 0, si});
                distinct_crashes.insert(crash);
                break;
            }
            const std::uint32_t target = app.transitions[p];
            if (target != AppModel::kNoTransition) {
                activity = target;
            }
        }
        executed_total += executed;
    }

    out.fitness.crashes = static_cast<int>(distinct_crashes.size());
    out.fitness.coverage =
        static_cast<double>(covered_count) / static_cast<double>(app.total_statements());
    out.fitness.length = suite.sequences.empty()
                             ? 0.0
                             : static_cast<double>(executed_total) /
                                   static_cast<double>(suite.sequences.size());
    return out;
}

std::string app_model_to_json(const AppModel& app) {
    nlohmann::json j;
    j["version"] = 1;
    j["model_seed"] = app.model_seed;
    j["activity_count"] = app.activity_count;
    j["statements_per_activity"] = app.statements_per_activity;
    j["alphabet_size"] = app.alphabet_size;

    nlohmann::json transitions = nlohmann::json::array();
    nlohmann::json crashes = nlohmann::json::array();
    nlohmann::json statements = nlohmann::json::array();
    for (std::size_t a = 0; a < app.activity_count; ++a) {
        for (std::uint32_t e = 0; e < app.alphabet_size; ++e) {
            const std::size_t p = app.pair_index(a, e);
            if (app.transitions[p] != AppModel::kNoTransition) {
                transitions.push_back({{"activity", a}, {"event", e}, {"target", app.transitions[p]}});
            }
            if (app.crash_ids[p] != 0) {
                crashes.push_back({{"activity", a}, {"event", e}, {"crash_id", app.crash_ids[p]}});
            }
            if (!app.statement_marks[p].empty()) {
                statements.push_back(
                    {{"activity", a}, {"event", e}, {"marks", app.statement_marks[p]}});
            }
        }
    }
    j["transitions"] = std::move(transitions);
    j["crashes"] = std::move(crashes);
    j["statements"] = std::move(statements);
    return j.dump(2) + "\n";
}

AppModel app_model_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) {
        throw std::invalid_argument("app model: unsupported format version");
    }
    AppModel app;
    app.model_seed = j.at("model_seed").get<std::uint64_t>();
    app.activity_count = j.at("activity_count").get<std::size_t>();
    app.statements_per_activity = j.at("statements_per_activity").get<std::size_t>();
    app.alphabet_size = j.at("alphabet_size").get<std::uint32_t>();
    const std::size_t pairs = app.activity_count * app.alphabet_size;
    app.transitions.assign(pairs, AppModel::kNoTransition);
    app.crash_ids.assign(pairs, 0);
    app.statement_marks.resize(pairs);
    for (const auto& t : j.at("transitions")) {
        app.transitions[app.pair_index(t.at("activity").get<std::size_t>(),
                                       t.at("event").get<std::uint32_t>())] =
            t.at("target").get<std::uint32_t>();
    }
    for (const auto& c : j.at("crashes")) {
        app.crash_ids[app.pair_index(c.at("activity").get<std::size_t>(),
                                     c.at("event").get<std::uint32_t>())] =
            c.at("crash_id").get<std::uint32_t>();
    }
    for (const auto& s : j.at("statements")) {
        app.statement_marks[app.pair_index(s.at("activity").get<std::size_t>(),
                                           s.at("event").get<std::uint32_t>())] =
            s.at("marks").get<std::vector<std::uint32_t>>();
    }
    app.validate();
    return app;
}

}  // namespace tsgen
