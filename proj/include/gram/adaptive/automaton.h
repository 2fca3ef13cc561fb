#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gram/hypersong/hypersong.h"

namespace gram::adaptive {

struct LambdaSpec {
    double seconds = 0.0;
    int target = 0;
};

/// Moore machine extended with a per-state insensitivity time and a
/// per-state null-input timeout, as loaded from the JSON DFA document.
struct Automaton {
    std::string id;
    std::string name;
    std::vector<std::optional<int>> outputs;  // hypersong version, null = silence
    std::vector<int> meta_theme_indexes;
    std::string meta_theme_prefix;
    int initial_state = 0;
    std::vector<double> insensitivity;                  // "delay" field
    int final_state = -1;                               // -1 = none
    std::vector<std::vector<std::pair<int, int>>> table;  // per state: [input, next]
    std::string intro_theme;                            // played once, "" = skip
    std::vector<std::optional<LambdaSpec>> lambdas;

    int state_count() const { return static_cast<int>(outputs.size()); }
    void validate() const;  // SchemaError / TimingViolation
};

Automaton load_dfa(const std::string& json_text);
Automaton load_dfa_file(const std::string& path);

struct Runtime {
    int state = 0;
    double t = 0.0;  // seconds since the last transition
    bool halted = false;
};

Runtime make_runtime(const Automaton& automaton);

struct StepOptions {
    bool undefined_input_self_loops = true;  // false raises UndefinedInput
};

struct StepResult {
    int state = 0;
    std::optional<int> output;
    bool transitioned = false;
};

/// Applies exactly one transition-function case for a dt-second tick.
/// The time counter resets to zero on every state change; entering the
/// final state halts the runtime.
StepResult step(Runtime& runtime, const Automaton& automaton, std::optional<int> input,
                double dt = 1.0, const StepOptions& options = {});

struct ScheduleEntry {
    double slot_seconds = 0.0;
    std::optional<int> version;  // null = silence
    int fragment = 0;
    double overlap_lead = 0.0;   // previous fragment's decay tail
};

/// Next fragment for the alternate-player scheme: fragment index advances
/// by one (modulo the fragment count), the version is the current state's
/// output at decision time.
ScheduleEntry schedule_next(const Runtime& runtime, const Automaton& automaton,
                            const hypersong::Hypersong& song, int playing_fragment,
                            double playhead_seconds);

struct TimelineEvent {
    double t = 0.0;
    int state = 0;
    std::optional<int> output;
    bool transitioned = false;
};

struct Timeline {
    std::vector<TimelineEvent> events;       // initial state plus transitions
    std::vector<ScheduleEntry> schedule;     // fragment plan when a hypersong is bound
    std::string intro_theme;                 // played once before the automaton starts
    double end_seconds = 0.0;
    bool halted = false;
};

struct TraceSample {
    double t = 0.0;
    std::optional<int> input;  // null entries are allowed but implied anyway
};

struct SimulateOptions {
    double dt = 1.0;
    double horizon_seconds = 7200.0;  // cap when no final state is reached
    StepOptions step;
};

/// Deterministic trace replay through step/schedule_next.
Timeline simulate(const Automaton& automaton, const std::vector<TraceSample>& trace,
                  const hypersong::Hypersong* song = nullptr,
                  const SimulateOptions& options = {});

std::string timeline_json(const Timeline& timeline);

}  // namespace gram::adaptive
