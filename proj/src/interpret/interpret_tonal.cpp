#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/core/scale.h"
#include "gram/interpret/interpret.h"

namespace gram::interpret {

namespace {

using tonal::Symbol;

struct StateFrame {
    int degree;
    int root;
    Rational duration;
    Rational onset;  // only used by the time stack
};

struct UnitFrame {
    StructureUnit unit;
};

int velocity_for(int dynamic, int lo, int hi) {
    const int d = std::clamp(dynamic, 1, 8);
    return lo + static_cast<int>((d - 1) * (hi - lo) / 7.0 + 0.5);
}

int floor_mod(int a, int b) { const int m = a % b; return m < 0 ? m + b : m; }

/// Pitch with class `pc` nearest to `reference` (ties toward the lower).
int nearest_with_pc(int pc, int reference) {
    int best = -1;
    for (int candidate = pc; candidate <= 127; candidate += 12) {
        if (best < 0 || std::abs(candidate - reference) < std::abs(best - reference)) best = candidate;
    }
    return best;
}

}  // namespace

Result interpret_tonal(const tonal::SymbolString& seq, const tonal::Genome& genome,
                       const HarmonyTables& tables, const Options& options) {
    genome.validate();
    const bool strict = options.mode == Mode::Strict;
    Result result;
    Composition& comp = result.composition;
    comp.initial_bpm = genome.globals.initial_tempo;

    for (const auto& spec : genome.tracks) {
        const Instrument& ins = instrument_by_id(spec.instrument_id);
        TrackInfo track;
        track.instrument_name = ins.name;
        track.role_id = spec.role_id;
        track.instrument_id = spec.instrument_id;
        track.midi_program = spec.midi_program;
        track.tessitura_lo = spec.tessitura_lo;
        track.tessitura_hi = spec.tessitura_hi;
        track.sweet_lo = std::max(spec.tessitura_lo, ins.sweet_lo);
        track.sweet_hi = std::min(spec.tessitura_hi, ins.sweet_hi);
        track.velocity_lo = spec.velocity_lo;
        track.velocity_hi = spec.velocity_hi;
        track.max_polyphony = std::max(1, ins.max_polyphony);
        track.is_rest_track = spec.instrument_id == kRestInstrument;
        comp.tracks.push_back(std::move(track));
    }
    comp.notes.resize(comp.tracks.size());

    const Scale& mode = scale_by_id(genome.globals.initial_mode);
    // Tonic pitch class comes from the first sounding track's initial pitch.
    int tonic_pc = 0;
    for (const auto& t : genome.tracks)
        if (t.instrument_id != kRestInstrument) { tonic_pc = floor_mod(t.initial_pitch, 12); break; }

    Rational onset(0);
    Rational duration = genome.globals.base_duration;
    const Rational step = genome.globals.duration_step;
    int degree = 0;
    int root = 0;
    int tone_shift = 0;
    int chord_id = genome.globals.initial_chord;
    int dynamic = std::clamp(genome.globals.initial_dynamic + 1, 1, 8);

    std::vector<StateFrame> state_stack;
    std::vector<StateFrame> time_stack;
    std::vector<UnitFrame> unit_stack;
    std::multiset<int> suppressed_roles;
    std::optional<Symbol> pending_chord;   // M waiting for the next instrument
    std::optional<int> pending_accent;
    bool tie_next = false;
    int ramp_target = 0, ramp_remaining = 0;

    const auto warn = [&](const std::string& message) { result.warnings.push_back(message); };

    const auto tracks_of_role = [&](int role) {
        std::vector<std::size_t> out;
        for (std::size_t t = 0; t < comp.tracks.size(); ++t)
            if (comp.tracks[t].role_id == role && !comp.tracks[t].is_rest_track) out.push_back(t);
        return out;
    };

    const auto note_on_open_units = [&](const Note& n) {
        for (auto& frame : unit_stack)
            if (n.end() > frame.unit.end) frame.unit.end = n.end();
    };

    const auto emit = [&](std::size_t track_index) {
        auto& spec = genome.tracks[track_index];
        const bool suppressed = suppressed_roles.count(spec.role_id) > 0;
        if (ramp_remaining > 0) {
            dynamic += (ramp_target > dynamic) ? 1 : (ramp_target < dynamic ? -1 : 0);
            --ramp_remaining;
        }
        Note base;
        base.onset = onset;
        base.duration = duration > Rational(0) ? duration : Rational(1, 1000);
        base.is_rest = comp.tracks[track_index].is_rest_track || suppressed;
        base.dynamic = std::clamp(dynamic, 1, 8);
        base.velocity = base.is_rest ? 0
                                     : velocity_for(base.dynamic, spec.velocity_lo, spec.velocity_hi);
        if (pending_accent) {
            base.articulations |= kAccento;
            base.velocity = std::clamp(base.velocity + 6 * *pending_accent, 0, 127);
            pending_accent.reset();
        }
        if (tie_next) { base.articulations |= kTie; tie_next = false; }

        auto& out = comp.notes[track_index];
        if (base.is_rest) {
            base.is_rest = true;
            out.push_back(base);
            note_on_open_units(base);
        } else if (pending_chord) {
            const auto& args = pending_chord->args;  // index, notes, shift, behavior
            const int index = args[0];
            if (index < 0 || index >= static_cast<int>(tables.chords.size())) {
                if (strict) throw UnknownChord("chord index " + std::to_string(index) +
                                               " outside the style table");
                warn("chord index " + std::to_string(index) + " clamped");
            }
            const auto& shape =
                tables.chords[static_cast<std::size_t>(std::clamp(index, 0,
                    static_cast<int>(tables.chords.size()) - 1))];
            if (args[3] != 0) warn("chord behavior " + std::to_string(args[3]) + " is reserved; using 0");
            const int root_pc = degree_pitch_class(mode, tonic_pc, root);
            const int root_pitch = nearest_with_pc(root_pc, spec.initial_pitch) + args[2] + tone_shift;
            comp.harmony.push_back({onset, root, index, static_cast<int>(track_index)});
            // The notes bitmask selects chord tones; 0 plays the root alone.
            std::vector<int> tones;
            if (args[1] == 0) {
                tones.push_back(root_pitch);
            } else {
                for (std::size_t b = 0; b < shape.intervals.size(); ++b)
                    if (args[1] & (1 << b)) tones.push_back(root_pitch + shape.intervals[b]);
                if (tones.empty()) tones.push_back(root_pitch);
            }
            for (int pitch : tones) {
                Note n = base;
                n.pitch = pitch;
                out.push_back(n);
                note_on_open_units(n);
            }
            pending_chord.reset();
        } else {
            base.pitch = resolve_degree(mode, spec.initial_pitch, degree, tone_shift);
            out.push_back(base);
            note_on_open_units(base);
        }
        onset += base.duration;
    };

    for (const Symbol& sym : seq) {
        switch (sym.kind) {
            case Symbol::Kind::PitchUp: ++degree; ++root; break;
            case Symbol::Kind::PitchDown: --degree; --root; break;
            case Symbol::Kind::ToneUp: ++tone_shift; break;
            case Symbol::Kind::ToneDown: --tone_shift; break;
            case Symbol::Kind::DurUp: duration += step; break;
            case Symbol::Kind::DurDown:
                duration -= step;
                if (duration <= Rational(0)) duration = Rational(1, 1000);
                break;
            case Symbol::Kind::Push:
                state_stack.push_back({degree, root, duration, Rational(0)});
                break;
            case Symbol::Kind::Pop:
                if (state_stack.empty()) {
                    if (strict) throw UnderflowError("] on an empty stack");
                    warn("] ignored: empty stack");
                } else {
                    degree = state_stack.back().degree;
                    root = state_stack.back().root;
                    duration = state_stack.back().duration;
                    state_stack.pop_back();
                }
                break;
            case Symbol::Kind::PushTime:
                time_stack.push_back({degree, root, duration, onset});
                break;
            case Symbol::Kind::PopTime:
                if (time_stack.empty()) {
                    if (strict) throw UnderflowError("> on an empty time stack");
                    warn("> ignored: empty time stack");
                } else {
                    degree = time_stack.back().degree;
                    root = time_stack.back().root;
                    duration = time_stack.back().duration;
                    onset = time_stack.back().onset;
                    time_stack.pop_back();
                }
                break;
            case Symbol::Kind::Chord:
                pending_chord = sym;
                chord_id = sym.args[0];
                break;
            case Symbol::Kind::Accent: pending_accent = sym.args[0]; break;
            case Symbol::Kind::Dynamic: {
                const int origin = std::clamp(sym.args[0] + 1, 1, 8);
                const int target = sym.args[1];
                if (target == 0) {
                    dynamic = origin;
                    ramp_remaining = 0;
                } else {
                    dynamic = origin;
                    ramp_target = std::clamp(target + 1, 1, 8);
                    ramp_remaining = 8;  // progressive span, in notes
                }
                break;
            }
            case Symbol::Kind::RhythmAlter: {
                const auto tracks = tracks_of_role(sym.args[0]);
                if (tracks.empty()) {
                    if (strict) throw RoleNotFound("C names role " + std::to_string(sym.args[0]));
                    warn("C: role " + std::to_string(sym.args[0]) + " not present");
                    break;
                }
                auto& notes = comp.notes[tracks.front()];
                const int pos = sym.args[1];
                if (pos < 0 || pos >= static_cast<int>(notes.size())) {
                    warn("C: position " + std::to_string(pos) + " out of range");
                    break;
                }
                Note& target = notes[static_cast<std::size_t>(pos)];
                if (sym.args[2] == 0) {
                    // Split the note in two halves.
                    Note second = target;
                    target.duration = target.duration / Rational(2);
                    second.duration = target.duration;
                    second.onset = target.end();
                    notes.insert(notes.begin() + pos + 1, second);
                } else {
                    target.duration = target.duration * Rational(2);
                }
                break;
            }
            case Symbol::Kind::NoteRestFlip: {
                const auto tracks = tracks_of_role(sym.args[0]);
                if (tracks.empty()) {
                    if (strict) throw RoleNotFound("V names role " + std::to_string(sym.args[0]));
                    warn("V: role " + std::to_string(sym.args[0]) + " not present");
                    break;
                }
                auto& notes = comp.notes[tracks.front()];
                const int pos = sym.args[1];
                if (pos < 0 || pos >= static_cast<int>(notes.size())) {
                    warn("V: position " + std::to_string(pos) + " out of range");
                    break;
                }
                Note& target = notes[static_cast<std::size_t>(pos)];
                if (target.is_rest) {
                    target.is_rest = false;
                    target.pitch = resolve_degree(mode, genome.tracks[tracks.front()].initial_pitch,
                                                  sym.args[2], 0);
                    target.velocity = velocity_for(target.dynamic,
                                                   genome.tracks[tracks.front()].velocity_lo,
                                                   genome.tracks[tracks.front()].velocity_hi);
                } else {
                    target.is_rest = true;
                    target.velocity = 0;
                }
                break;
            }
            case Symbol::Kind::PitchAlter: {
                const auto tracks = tracks_of_role(sym.args[0]);
                if (tracks.empty()) {
                    if (strict) throw RoleNotFound("p names role " + std::to_string(sym.args[0]));
                    warn("p: role " + std::to_string(sym.args[0]) + " not present");
                    break;
                }
                auto& notes = comp.notes[tracks.front()];
                const int pos = sym.args[1];
                if (pos < 0 || pos >= static_cast<int>(notes.size())) {
                    warn("p: position " + std::to_string(pos) + " out of range");
                    break;
                }
                Note& target = notes[static_cast<std::size_t>(pos)];
                if (!target.is_rest)
                    target.pitch = resolve_degree(mode, target.pitch, sym.args[2], sym.args[3]);
                break;
            }
            case Symbol::Kind::Window:
                warn("window operator left in a fully developed string; ignored");
                break;
            case Symbol::Kind::Suppress:
                warn("suppressor left in a fully developed string; ignored");
                break;
            case Symbol::Kind::Anacrusis: {
                // Deletes the leading material of the span it covers: notes
                // starting within [onset - durTotal, onset - durAnacrusis).
                const Rational total(sym.args[0]);
                const Rational keep(sym.args[1]);
                const Rational from = onset - total;
                const Rational until = onset - keep;
                for (auto& track_notes : comp.notes) {
                    track_notes.erase(std::remove_if(track_notes.begin(), track_notes.end(),
                                                     [&](const Note& n) {
                                                         return n.onset >= from && n.onset < until;
                                                     }),
                                      track_notes.end());
                }
                break;
            }
            case Symbol::Kind::Extended:
                switch (sym.args[0]) {
                    case tonal::kExtTempo:
                        if (sym.args[1] > 0)
                            comp.tempo.push_back({onset, static_cast<double>(sym.args[1])});
                        break;
                    case tonal::kExtMode:
                        warn("mode change after development is not applied retroactively");
                        break;
                    case tonal::kExtChord: chord_id = sym.args[1]; break;
                    case tonal::kExtTie: tie_next = true; break;
                    default: break;
                }
                break;
            case Symbol::Kind::Instrument:
                emit(static_cast<std::size_t>(sym.ref));
                break;
            case Symbol::Kind::NonTerminal:
                throw HierarchyViolation("non-terminal reached the interpreter");
            case Symbol::Kind::UnitBegin: {
                UnitFrame frame;
                frame.unit.level = sym.args[0];
                frame.unit.type_id = sym.args[1];
                frame.unit.instance = sym.args[2];
                frame.unit.start = onset;
                frame.unit.end = onset;
                unit_stack.push_back(frame);
                break;
            }
            case Symbol::Kind::UnitEnd: {
                if (unit_stack.empty()) break;
                UnitFrame frame = unit_stack.back();
                unit_stack.pop_back();
                if (frame.unit.end < onset) frame.unit.end = onset;
                comp.structure.push_back(frame.unit);
                break;
            }
            case Symbol::Kind::SuppressBegin: suppressed_roles.insert(sym.args[0]); break;
            case Symbol::Kind::SuppressEnd: {
                auto it = suppressed_roles.find(sym.args[0]);
                if (it != suppressed_roles.end()) suppressed_roles.erase(it);
                break;
            }
        }
    }

    std::sort(comp.structure.begin(), comp.structure.end(),
              [](const StructureUnit& a, const StructureUnit& b) {
                  return a.level != b.level ? a.level < b.level : a.start < b.start;
              });
    comp.sort_notes();
    comp.meta.initial_defaults = {
        {"tempo", std::to_string(genome.globals.initial_tempo)},
        {"dynamic", std::to_string(genome.globals.initial_dynamic)},
        {"mode", std::to_string(genome.globals.initial_mode)},
        {"chord", std::to_string(genome.globals.initial_chord)},
    };
    comp.meta.development_summary =
        "tonal interpretation of " + std::to_string(seq.size()) + " symbols across " +
        std::to_string(genome.level_count()) + " levels";
    (void)chord_id;
    return result;
}

}  // namespace gram::interpret
