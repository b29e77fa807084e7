#pragma once

#include "tsgen/genotype.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tsgen {

/// Seeded synthetic app under test: an activity graph with per-(activity,
/// event) transitions, crash triggers and statement marks. Activity 0 is the
/// launch activity. Immutable once built; evaluation is pure.
struct AppModel {
    std::size_t activity_count = 1;
    std::size_t statements_per_activity = 1;
    std::uint32_t alphabet_size = 1;
    std::uint64_t model_seed = 0;

    static constexpr std::uint32_t kNoTransition = 0xffffffffu;

    /// activity_count * alphabet_size entries, row-major by activity.
    /// kNoTransition means the event leaves the current activity unchanged.
    std::vector<std::uint32_t> transitions;

    /// Same layout; 0 means no crash, otherwise a unique positive crash id.
    std::vector<std::uint32_t> crash_ids;

    /// Same layout; statement indices of the activity marked as executed
    /// whenever the event fires there. Fixed at model construction.
    std::vector<std::vector<std::uint32_t>> statement_marks;

    std::size_t pair_index(std::size_t activity, Event event) const {
        return activity * alphabet_size + event;
    }
    std::size_t total_statements() const { return activity_count * statements_per_activity; }

    /// Structural validity check; throws std::invalid_argument on violation.
    void validate() const;
};

/// Objective triple of one evaluated suite. Crashes and coverage are
/// maximized, length is minimized.
struct FitnessVector {
    int crashes = 0;        // distinct crash ids triggered by the suite
    double coverage = 0.0;  // fraction of statements executed, in [0,1]
    double length = 0.0;    // mean executed events per sequence

    bool operator==(const FitnessVector&) const = default;
};

struct CrashReport {
    std::uint32_t crash_id = 0;
    std::size_t revealing_prefix_length = 0;  // executed events incl. the crashing one
    std::size_t suite_index = 0;              // filled by the caller (evaluation ordinal)
    std::size_t sequence_index = 0;           // position of the sequence within the suite
};

struct EvalOutcome {
    FitnessVector fitness;
    std::vector<CrashReport> reports;
};

/// Deterministic pseudo-random app model. Each (activity, event) pair
/// transitions to a uniformly random activity with probability 0.5 (no-op
/// otherwise), independently becomes a crash trigger with probability
/// crash_density (ids assigned 1, 2, ... in scan order), and marks a fixed
/// random subset of the activity's statements when executed.
AppModel generate_app_model(std::uint64_t model_seed, std::size_t activity_count,
                            std::size_t statements_per_activity, std::uint32_t alphabet_size,
                            double crash_density);

/// Executes every sequence of the suite from activity 0. Each event first
/// marks its statement subset, then either crashes (recording a report with
/// the current prefix length and truncating that sequence) or follows the
/// transition table. Coverage is the union over all sequences; crashes count
/// distinct ids; length is the mean executed sequence length. Throws
/// std::invalid_argument when an event id is outside the model alphabet.
EvalOutcome evaluate(const TestSuite& suite, const AppModel& app);

/// Versioned JSON serialization so experiments can pin the exact model.
std::string app_model_to_json(const AppModel& app);
AppModel app_model_from_json(const std::string& text);

}  // namespace tsgen
