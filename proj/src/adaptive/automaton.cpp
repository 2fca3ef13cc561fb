#include "gram/adaptive/automaton.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gram/core/errors.h"

namespace gram::adaptive {

using nlohmann::json;

void Automaton::validate() const {
    const int n = state_count();
    if (n == 0) throw SchemaError("automaton has no states");
    if (static_cast<int>(insensitivity.size()) != n)
        throw SchemaError("delay list length must equal the state count");
    if (static_cast<int>(table.size()) != n)
        throw SchemaError("table needs one entry list per state");
    if (static_cast<int>(lambdas.size()) != n)
        throw SchemaError("lambdas needs one entry per state");
    if (initial_state < 0 || initial_state >= n) throw SchemaError("initial state out of range");
    if (final_state >= n) throw SchemaError("final state out of range");
    for (int q = 0; q < n; ++q) {
        for (const auto& [input, next] : table[static_cast<std::size_t>(q)])
            if (next < 0 || next >= n)
                throw SchemaError("transition target " + std::to_string(next) + " out of range");
        const auto& lambda = lambdas[static_cast<std::size_t>(q)];
        if (lambda) {
            if (lambda->target < 0 || lambda->target >= n)
                throw SchemaError("lambda target out of range in state " + std::to_string(q));
            if (insensitivity[static_cast<std::size_t>(q)] > lambda->seconds)
                throw TimingViolation("state " + std::to_string(q) +
                                      ": insensitivity exceeds the null-input timeout");
        }
    }
}

Automaton load_dfa(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("DFA document is not valid JSON: ") + e.what());
    }
    Automaton out;
    try {
        out.id = doc.value("_id", "");
        out.name = doc.value("name", "");
        const json& model = doc.at("model");
        for (const auto& v : model.at("outputs")) {
            if (v.is_null()) out.outputs.push_back(std::nullopt);
            else out.outputs.push_back(v.get<int>());
        }
        if (model.contains("numMetaThemes"))
            out.meta_theme_indexes = model["numMetaThemes"].get<std::vector<int>>();
        out.meta_theme_prefix = model.value("metaThemePrefix", "");
        out.initial_state = model.at("initialState").get<int>();
        out.insensitivity = model.at("delay").get<std::vector<double>>();
        out.final_state = model.value("finalState", -1);
        for (const auto& row : model.at("table")) {
            std::vector<std::pair<int, int>> entries;
            for (const auto& pair : row)
                entries.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
            out.table.push_back(std::move(entries));
        }
        out.intro_theme = model.value("introTheme", "");
        for (const auto& v : model.at("lambdas")) {
            if (v.is_null()) { out.lambdas.push_back(std::nullopt); continue; }
            out.lambdas.push_back(LambdaSpec{v.at(0).get<double>(), v.at(1).get<int>()});
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("DFA document: ") + e.what());
    }
    out.validate();
    return out;
}

Automaton load_dfa_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_dfa(buf.str());
}

Runtime make_runtime(const Automaton& automaton) {
    Runtime rt;
    rt.state = automaton.initial_state;
    rt.t = 0.0;
    rt.halted = automaton.final_state == automaton.initial_state;
    return rt;
}

StepResult step(Runtime& runtime, const Automaton& automaton, std::optional<int> input,
                double dt, const StepOptions& options) {
    if (runtime.halted) throw Halted("runtime reached the final state");
    const auto q = static_cast<std::size_t>(runtime.state);

    const auto transition_to = [&](int next) {
        runtime.state = next;
        runtime.t = 0.0;
        if (next == automaton.final_state) runtime.halted = true;
        return StepResult{next, automaton.outputs[static_cast<std::size_t>(next)], true};
    };

    // Insensitivity: the state ignores everything while t < I.
    if (runtime.t < automaton.insensitivity[q]) {
        runtime.t += dt;
        return {runtime.state, automaton.outputs[q], false};
    }
    if (!input) {
        const auto& lambda = automaton.lambdas[q];
        if (lambda && runtime.t >= lambda->seconds) return transition_to(lambda->target);
        runtime.t += dt;
        return {runtime.state, automaton.outputs[q], false};
    }
    for (const auto& [symbol, next] : automaton.table[q])
        if (symbol == *input) return transition_to(next);
    if (!options.undefined_input_self_loops)
        throw UndefinedInput("state " + std::to_string(runtime.state) + " has no entry for input " +
                             std::to_string(*input));
    return transition_to(runtime.state);  // logged self-loop
}

ScheduleEntry schedule_next(const Runtime& runtime, const Automaton& automaton,
                            const hypersong::Hypersong& song, int playing_fragment,
                            double playhead_seconds) {
    ScheduleEntry entry;
    entry.slot_seconds = playhead_seconds;
    entry.fragment = song.manifest.fragment_count
                         ? (playing_fragment + 1) % song.manifest.fragment_count
                         : 0;
    const auto output = automaton.outputs[static_cast<std::size_t>(runtime.state)];
    if (runtime.halted || !output ||
        *output >= static_cast<int>(song.versions.size())) {
        entry.version = std::nullopt;  // silence
        entry.overlap_lead = 0.0;
        return entry;
    }
    entry.version = output;
    if (playing_fragment >= 0 && playing_fragment < song.manifest.fragment_count)
        entry.overlap_lead =
            song.fragments[static_cast<std::size_t>(*output)][static_cast<std::size_t>(playing_fragment)]
                .tail_seconds;
    return entry;
}

Timeline simulate(const Automaton& automaton, const std::vector<TraceSample>& trace,
                  const hypersong::Hypersong* song, const SimulateOptions& options) {
    Timeline timeline;
    Runtime rt = make_runtime(automaton);
    timeline.intro_theme = automaton.intro_theme;  // empty string = skip
    timeline.events.push_back(
        {0.0, rt.state, automaton.outputs[static_cast<std::size_t>(rt.state)], false});

    std::vector<TraceSample> ordered = trace;
    std::sort(ordered.begin(), ordered.end(),
              [](const TraceSample& a, const TraceSample& b) { return a.t < b.t; });
    std::size_t cursor = 0;
    const double last_input = ordered.empty() ? 0.0 : ordered.back().t;

    // Alternate-player bookkeeping when a hypersong is bound.
    int playing_fragment = -1;
    double next_boundary = 0.0;

    double now = 0.0;
    while (now < options.horizon_seconds) {
        if (song && now >= next_boundary) {
            const ScheduleEntry entry =
                schedule_next(rt, automaton, *song, playing_fragment, now);
            timeline.schedule.push_back(entry);
            playing_fragment = entry.fragment;
            double seconds = 1.0;
            if (entry.version &&
                *entry.version < static_cast<int>(song->fragments.size()))
                seconds = song->fragments[static_cast<std::size_t>(*entry.version)]
                              [static_cast<std::size_t>(entry.fragment)]
                                  .nominal_seconds;
            next_boundary = now + std::max(seconds, options.dt);
        }
        std::optional<int> input;
        while (cursor < ordered.size() && ordered[cursor].t <= now + 1e-9) {
            if (ordered[cursor].input) input = ordered[cursor].input;
            ++cursor;
        }
        const StepResult result = step(rt, automaton, input, options.dt, options.step);
        if (result.transitioned) {
            timeline.events.push_back({now, result.state, result.output, true});
            // The remainder of the transition tick elapses in the new state.
            if (!rt.halted) rt.t += options.dt;
        }
        now += options.dt;
        if (rt.halted) break;
        if (!song && cursor >= ordered.size()) {
            // Without inputs left, a state lacking a timeout never moves.
            const auto& lambda = automaton.lambdas[static_cast<std::size_t>(rt.state)];
            if (!lambda && now > last_input + 1.0) break;
        }
    }
    timeline.end_seconds = now;
    timeline.halted = rt.halted;
    return timeline;
}

std::string timeline_json(const Timeline& timeline) {
    json doc;
    doc["halted"] = timeline.halted;
    doc["endSeconds"] = timeline.end_seconds;
    if (!timeline.intro_theme.empty()) doc["introTheme"] = timeline.intro_theme;
    json events = json::array();
    for (const auto& ev : timeline.events) {
        json entry;
        entry["t"] = ev.t;
        entry["state"] = ev.state;
        if (ev.output) entry["output"] = *ev.output;
        else entry["output"] = nullptr;
        entry["transitioned"] = ev.transitioned;
        events.push_back(entry);
    }
    doc["events"] = events;
    if (!timeline.schedule.empty()) {
        json schedule = json::array();
        for (const auto& s : timeline.schedule) {
            json entry;
            entry["slotSeconds"] = s.slot_seconds;
            if (s.version) entry["version"] = *s.version;
            else entry["version"] = nullptr;
            entry["fragment"] = s.fragment;
            entry["overlapLead"] = s.overlap_lead;
            schedule.push_back(entry);
        }
        doc["schedule"] = schedule;
    }
    return doc.dump(2) + "\n";
}

}  // namespace gram::adaptive
