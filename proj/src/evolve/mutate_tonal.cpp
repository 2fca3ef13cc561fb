#include <algorithm>
#include <map>
#include <set>

#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/evolve/evolve.h"

namespace gram::evolve {

namespace {

using tonal::Genome;
using tonal::Rule;
using tonal::Symbol;

constexpr const char* kInstrumentPool = "abcdefghijklmoqu";

bool is_rest_track(const Genome& genome, int track) {
    return genome.tracks[static_cast<std::size_t>(track)].instrument_id == kRestInstrument;
}

Symbol random_terminal_op(Rng& rng) {
    switch (rng.uniform_int(0, 4)) {
        case 0: return Symbol::simple(Symbol::Kind::PitchUp);
        case 1: return Symbol::simple(Symbol::Kind::PitchDown);
        case 2: return Symbol::simple(Symbol::Kind::ToneUp);
        case 3: return Symbol::simple(Symbol::Kind::ToneDown);
        default:
            return Symbol::with_args(Symbol::Kind::Dynamic,
                                     {static_cast<int>(rng.uniform_int(0, 7)), 0});
    }
}

bool is_editable_terminal(const Symbol& s) {
    switch (s.kind) {
        case Symbol::Kind::PitchUp:
        case Symbol::Kind::PitchDown:
        case Symbol::Kind::ToneUp:
        case Symbol::Kind::ToneDown:
        case Symbol::Kind::Accent:
        case Symbol::Kind::Dynamic:
            return true;
        default:
            return false;
    }
}

char fresh_symbol_char(const Genome& genome) {
    std::set<char> used;
    for (const auto& track : genome.tracks) used.insert(track.symbol);
    for (char c : std::string(kInstrumentPool))
        if (!used.count(c)) return c;
    return 0;
}

int occurrences_in_level(const std::vector<Rule>& rules, int ordinal) {
    int count = 0;
    for (const auto& rule : rules)
        for (const auto& s : rule.rhs)
            if (s.kind == Symbol::Kind::NonTerminal && s.ref == ordinal) ++count;
    return count;
}

bool mutate_once(Genome& genome, Rng& rng, const MutationConfig& config) {
    std::vector<double> weights(config.kind_weights.begin(),
                                config.kind_weights.begin() +
                                    std::min<std::size_t>(4, config.kind_weights.size()));
    switch (rng.weighted_index(weights)) {
        case 0: {  // global parameter
            switch (rng.uniform_int(0, 1)) {
                case 0:
                    genome.globals.initial_tempo = std::clamp(
                        genome.globals.initial_tempo + 10.0 * rng.uniform_int(-2, 2), 40.0, 208.0);
                    break;
                default:
                    genome.globals.initial_dynamic = static_cast<int>(
                        std::clamp<std::int64_t>(genome.globals.initial_dynamic +
                                                 rng.uniform_int(-1, 1), 0, 7));
                    break;
            }
            return true;
        }
        case 1: {  // instrument swap, role preserved
            std::vector<std::size_t> candidates;
            for (std::size_t t = 0; t < genome.tracks.size(); ++t)
                if (!is_rest_track(genome, static_cast<int>(t))) candidates.push_back(t);
            if (candidates.empty()) return false;
            auto& track = genome.tracks[rng.pick(candidates)];
            const auto& table = instrument_table();
            const auto& replacement = table[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(table.size()) - 1))];
            track.instrument_id = replacement.id;
            track.midi_program = replacement.midi_program;
            return true;
        }
        case 2: {  // operator / non-terminal occurrence edit, hierarchy preserved
            const int level = static_cast<int>(rng.uniform_int(0, genome.level_count() - 1));
            auto& rules = genome.levels[static_cast<std::size_t>(level)];
            auto& rule = rules[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(rules.size()) - 1))];
            const int action = static_cast<int>(rng.uniform_int(0, 2));
            if (action == 0) {  // add a reserved terminal
                const auto at = static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(rule.rhs.size())));
                rule.rhs.insert(rule.rhs.begin() + static_cast<std::ptrdiff_t>(at),
                                random_terminal_op(rng));
                return true;
            }
            if (action == 1) {  // remove or duplicate a non-terminal occurrence
                std::vector<std::size_t> nts;
                for (std::size_t i = 0; i < rule.rhs.size(); ++i)
                    if (rule.rhs[i].kind == Symbol::Kind::NonTerminal) nts.push_back(i);
                if (nts.empty()) return false;
                const std::size_t at = rng.pick(nts);
                if (rng.chance(0.5) &&
                    occurrences_in_level(rules, rule.rhs[at].ref) > 1) {
                    rule.rhs.erase(rule.rhs.begin() + static_cast<std::ptrdiff_t>(at));
                } else {
                    rule.rhs.insert(rule.rhs.begin() + static_cast<std::ptrdiff_t>(at),
                                    rule.rhs[at]);
                }
                return true;
            }
            // change: replace an editable terminal
            std::vector<std::size_t> editable;
            for (std::size_t i = 0; i < rule.rhs.size(); ++i)
                if (is_editable_terminal(rule.rhs[i])) editable.push_back(i);
            if (editable.empty()) return false;
            rule.rhs[rng.pick(editable)] = random_terminal_op(rng);
            return true;
        }
        default: {  // add or remove an instrument symbol
            auto& final_rules = genome.levels.back();
            if (rng.chance(0.5)) {
                // Addition: duplicate an existing instrument's appearances,
                // the new symbol enclosed in <,> to the left of each one.
                std::vector<int> sources;
                for (std::size_t t = 0; t < genome.tracks.size(); ++t)
                    if (!is_rest_track(genome, static_cast<int>(t))) sources.push_back(static_cast<int>(t));
                if (sources.empty()) return false;
                const int source = rng.pick(sources);
                const char symbol = fresh_symbol_char(genome);
                if (symbol == 0) return false;
                tonal::TrackSpec spec = genome.tracks[static_cast<std::size_t>(source)];
                spec.symbol = symbol;
                const int fresh_track = static_cast<int>(genome.tracks.size());
                genome.tracks.push_back(spec);
                bool placed = false;
                for (auto& rule : final_rules) {
                    for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
                        if (rule.rhs[i].kind != Symbol::Kind::Instrument ||
                            rule.rhs[i].ref != source)
                            continue;
                        const Symbol group[3] = {Symbol::simple(Symbol::Kind::PushTime),
                                                 Symbol::instrument(fresh_track, symbol),
                                                 Symbol::simple(Symbol::Kind::PopTime)};
                        rule.rhs.insert(rule.rhs.begin() + static_cast<std::ptrdiff_t>(i),
                                        group, group + 3);
                        i += 3;
                        placed = true;
                    }
                }
                if (!placed) genome.tracks.pop_back();
                return placed;
            }
            // Removal: erase all appearances of one non-rest instrument,
            // provided another sounding instrument remains.
            std::map<int, int> appearance_count;
            for (const auto& rule : final_rules)
                for (const auto& s : rule.rhs)
                    if (s.kind == Symbol::Kind::Instrument && !is_rest_track(genome, s.ref))
                        ++appearance_count[s.ref];
            if (appearance_count.size() < 2) return false;
            std::vector<int> victims;
            for (const auto& [track, count] : appearance_count) victims.push_back(track);
            const int victim = rng.pick(victims);
            for (auto& rule : final_rules) {
                tonal::SymbolString kept;
                for (const auto& s : rule.rhs)
                    if (!(s.kind == Symbol::Kind::Instrument && s.ref == victim))
                        kept.push_back(s);
                rule.rhs = std::move(kept);
            }
            return true;
        }
    }
}

}  // namespace

tonal::Genome mutate_tonal(const tonal::Genome& genome, Rng& rng,
                           const MutationConfig& config) {
    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
        Genome candidate = genome;
        if (!mutate_once(candidate, rng, config)) continue;
        try {
            tonal::canonicalize(candidate);
            candidate.validate();
            return candidate;
        } catch (const Error&) {
            // degenerate draw; re-roll
        }
    }
    return genome;
}

namespace {

tonal::Genome try_crossover_tonal(const tonal::Genome& a, const tonal::Genome& b, Rng& rng) {
    Genome child = a;
    child.globals.initial_tempo =
        rng.chance(0.5) ? a.globals.initial_tempo : b.globals.initial_tempo;
    child.globals.initial_dynamic =
        rng.chance(0.5) ? a.globals.initial_dynamic : b.globals.initial_dynamic;

    // Instruments: per shared track index, optionally take the other
    // parent's instrument when the role matches.
    for (std::size_t t = 0; t < child.tracks.size() && t < b.tracks.size(); ++t) {
        if (child.tracks[t].role_id == b.tracks[t].role_id && rng.chance(0.5)) {
            child.tracks[t].instrument_id = b.tracks[t].instrument_id;
            child.tracks[t].midi_program = b.tracks[t].midi_program;
        }
    }

    // Replace a few rules with material of the same structural level.
    const int shared_levels = std::min(child.level_count(), b.level_count());
    const int replacements = static_cast<int>(rng.uniform_int(1, 2));
    for (int k = 0; k < replacements; ++k) {
        if (shared_levels <= 1) break;
        const int level = static_cast<int>(rng.uniform_int(1, shared_levels - 1));
        const auto& b_rules = b.levels[static_cast<std::size_t>(level)];
        auto& a_rules = child.levels[static_cast<std::size_t>(level)];
        const std::size_t j = static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(std::min(a_rules.size(), b_rules.size())) - 1));
        tonal::SymbolString mapped;
        for (const Symbol& s : b_rules[j].rhs) {
            Symbol m = s;
            if (s.kind == Symbol::Kind::NonTerminal) {
                if (level + 1 >= child.level_count()) continue;
                const auto limit =
                    static_cast<int>(child.levels[static_cast<std::size_t>(level + 1)].size()) - 1;
                m.ref = std::clamp(s.ref, 0, limit);
                m.name = 0;  // renamed to the child's rule below
            } else if (s.kind == Symbol::Kind::Instrument) {
                // Same index when the role matches, else the first track
                // of the same role; the rest pseudo-track maps to rest.
                int target = -1;
                const auto& b_track = b.tracks[static_cast<std::size_t>(s.ref)];
                const auto matches = [&](const tonal::TrackSpec& t) {
                    if (b_track.instrument_id == kRestInstrument)
                        return t.instrument_id == kRestInstrument;
                    return t.instrument_id != kRestInstrument && t.role_id == b_track.role_id;
                };
                if (s.ref < static_cast<int>(child.tracks.size()) &&
                    matches(child.tracks[static_cast<std::size_t>(s.ref)])) {
                    target = s.ref;
                } else {
                    for (std::size_t t = 0; t < child.tracks.size(); ++t)
                        if (matches(child.tracks[t])) { target = static_cast<int>(t); break; }
                }
                if (target < 0)
                    target = std::min<int>(s.ref, static_cast<int>(child.tracks.size()) - 1);
                m.ref = target;
                m.name = child.tracks[static_cast<std::size_t>(target)].symbol;
            }
            mapped.push_back(m);
        }
        if (!mapped.empty()) a_rules[j].rhs = std::move(mapped);
    }
    tonal::canonicalize(child);
    child.validate();
    return child;
}

}  // namespace

tonal::Genome crossover_tonal(const tonal::Genome& a, const tonal::Genome& b, Rng& rng) {
    // A splice can orphan a next-level rule; such draws are rejected and
    // re-rolled, falling back to a plain copy of the first parent.
    for (int attempt = 0; attempt < 16; ++attempt) {
        try {
            return try_crossover_tonal(a, b, rng);
        } catch (const Error&) {
        }
    }
    return a;
}

}  // namespace gram::evolve
