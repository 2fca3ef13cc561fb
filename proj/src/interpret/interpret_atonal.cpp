#include <algorithm>
#include <optional>

#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/core/scale.h"
#include "gram/interpret/interpret.h"

namespace gram::interpret {

namespace {

using atonal::Symbol;

struct PitchFrame {
    int degree;
    Rational duration;
};

int velocity_for(int dynamic, int lo, int hi) {
    const int d = std::clamp(dynamic, 1, 8);
    return lo + static_cast<int>((d - 1) * (hi - lo) / 7.0 + 0.5);
}

Rational rational_milli(double v) {
    return Rational(static_cast<std::int64_t>(v * 1000.0 + (v >= 0 ? 0.5 : -0.5)), 1000);
}

struct Articulations {
    std::uint32_t latched = 0;
    std::uint32_t one_shot = 0;

    std::uint32_t take() {
        const std::uint32_t value = latched | one_shot;
        one_shot = 0;
        return value;
    }
};

}  // namespace

Result interpret_atonal(const atonal::SymbolString& seq, const atonal::Genome& genome,
                        const AtonalDefaults& defaults, const Options& options) {
    genome.validate();
    const bool strict = options.mode == Mode::Strict;
    Result result;
    Composition& comp = result.composition;
    comp.initial_bpm = defaults.tempo_bpm;

    for (std::size_t k = 0; k < genome.rules.size(); ++k) {
        const auto& rule = genome.rules[k];
        const Instrument& ins = instrument_by_id(rule.instrument_id);
        TrackInfo track;
        track.instrument_name = ins.name;
        track.instrument_id = rule.instrument_id;
        track.midi_program = ins.midi_program;
        track.tessitura_lo = rule.tessitura_lo;
        track.tessitura_hi = rule.tessitura_hi;
        track.sweet_lo = std::max(rule.tessitura_lo, ins.sweet_lo);
        track.sweet_hi = std::min(rule.tessitura_hi, ins.sweet_hi);
        track.max_polyphony = std::max(1, ins.max_polyphony);
        track.is_rest_track = rule.instrument_id == kRestInstrument;
        comp.tracks.push_back(std::move(track));
    }
    comp.notes.resize(comp.tracks.size());

    Rational onset(0);
    Rational duration = rational_milli(genome.base_duration);
    const Rational step = rational_milli(genome.duration_step);
    int degree = 0;
    int dynamic = defaults.dynamic;
    double tempo = defaults.tempo_bpm;

    std::vector<PitchFrame> pitch_stack;
    std::vector<PitchFrame> global_stack;
    std::vector<Rational> time_stack;

    Articulations artics;
    Articulations effects;
    std::optional<int> property_arg;
    std::optional<int> chord_arg;     // set while chord mode is active
    std::optional<int> grace_arg;
    std::optional<int> arpeggio_arg;
    bool chord_latched = false, grace_latched = false, arpeggio_latched = false;
    std::optional<int> pending_alter;  // chromatic offset for the next note
    int cresc_dir = 0;                 // +1 crescendo latched, -1 diminuendo
    int cresc_next = 0;                // one-shot modulation for the next note

    const auto warn = [&](const std::string& message) { result.warnings.push_back(message); };
    const auto take_arg = [&](const char* op) -> std::optional<int> {
        if (!property_arg) {
            if (strict) throw MissingArgument(std::string(op) + " without a preceding @ argument");
            warn(std::string(op) + " ignored: no property argument");
            return std::nullopt;
        }
        const int v = *property_arg;
        property_arg.reset();
        return v;
    };

    const auto emit = [&](std::size_t track_index) {
        const auto& rule = genome.rules[track_index];
        const Rational emitted = duration * rational_milli(rule.duration_factor);
        const Scale& scale = scale_by_id(rule.scale_id);
        if (cresc_dir != 0) dynamic = std::clamp(dynamic + cresc_dir, 1, 8);
        const int note_dynamic = std::clamp(dynamic + cresc_next, 1, 8);
        cresc_next = 0;

        Note base;
        base.onset = onset;
        base.duration = emitted > Rational(0) ? emitted : Rational(1, 1000);
        base.is_rest = comp.tracks[track_index].is_rest_track;
        base.dynamic = note_dynamic;
        base.velocity = base.is_rest ? 0
                                     : velocity_for(note_dynamic, comp.tracks[track_index].velocity_lo,
                                                    comp.tracks[track_index].velocity_hi);
        base.articulations = artics.take();
        base.effects = effects.take();
        const int alter = pending_alter.value_or(0);
        pending_alter.reset();
        base.pitch = resolve_degree(scale, defaults.initial_pitch, degree, alter);

        auto& out = comp.notes[track_index];
        if (base.is_rest) {
            out.push_back(base);
        } else if (arpeggio_arg) {
            const int segments = std::clamp(*arpeggio_arg, 1, 8);
            const Rational part = base.duration / Rational(segments);
            for (int j = 0; j < segments; ++j) {
                Note n = base;
                n.onset = onset + part * Rational(j);
                n.duration = part;
                n.pitch = resolve_degree(scale, defaults.initial_pitch, degree + 2 * j, alter);
                n.articulations |= kArpeggio;
                out.push_back(n);
            }
            if (!arpeggio_latched) arpeggio_arg.reset();
        } else {
            out.push_back(base);
            if (chord_arg) {
                const int stacked = std::clamp(*chord_arg, 1, 6);
                for (int j = 1; j <= stacked; ++j) {
                    Note n = base;
                    n.pitch = resolve_degree(scale, defaults.initial_pitch, degree + 2 * j, alter);
                    out.push_back(n);
                }
                if (!chord_latched) chord_arg.reset();
            }
            if (grace_arg) {
                Note n = base;
                n.duration = base.duration / Rational(4);
                n.pitch = resolve_degree(scale, defaults.initial_pitch, degree + *grace_arg, alter);
                n.articulations |= kGrace;
                out.push_back(n);
                if (!grace_latched) grace_arg.reset();
            }
        }
        onset += base.duration;
    };

    // Articulation triplets: (next-only, latch, terminate) starting at a base id.
    const auto articulation_triplet = [&](int id, int base_id, std::uint32_t flag,
                                          Articulations& target) {
        if (id == base_id) target.one_shot |= flag;
        else if (id == base_id + 1) target.latched |= flag;
        else target.latched &= ~flag;
    };

    for (const Symbol& sym : seq) {
        switch (sym.kind) {
            case Symbol::Kind::Structural:
                emit(static_cast<std::size_t>(sym.value));
                break;
            case Symbol::Kind::Argument:
                if (property_arg) warn("property argument @" + std::to_string(*property_arg) +
                                       " discarded by a newer @");
                property_arg = sym.value;
                break;
            case Symbol::Kind::Operator: {
                const int id = sym.value;
                switch (id) {
                    case atonal::kOpPitchUp: ++degree; break;
                    case atonal::kOpPitchDown: --degree; break;
                    case atonal::kOpDurUp: duration += step; break;
                    case atonal::kOpDurDown:
                        duration -= step;
                        if (duration <= Rational(0)) duration = Rational(1, 1000);
                        break;
                    case atonal::kOpPushPitch: pitch_stack.push_back({degree, duration}); break;
                    case atonal::kOpPopPitch:
                        if (pitch_stack.empty()) {
                            if (strict) throw UnderflowError("$6 on an empty pitch stack");
                            warn("$6 ignored: empty pitch stack");
                        } else {
                            degree = pitch_stack.back().degree;
                            duration = pitch_stack.back().duration;
                            pitch_stack.pop_back();
                        }
                        break;
                    case atonal::kOpPushTime: time_stack.push_back(onset); break;
                    case atonal::kOpPopTime:
                        if (time_stack.empty()) {
                            if (strict) throw UnderflowError("$8 on an empty time stack");
                            warn("$8 ignored: empty time stack");
                        } else {
                            onset = time_stack.back();
                            time_stack.pop_back();
                        }
                        break;
                    case atonal::kOpPushGlobal: global_stack.push_back({degree, duration}); break;
                    case atonal::kOpPopGlobal:
                        if (global_stack.empty()) {
                            if (strict) throw UnderflowError("$101 on an empty global stack");
                            warn("$101 ignored: empty global stack");
                        } else {
                            degree = global_stack.back().degree;
                            duration = global_stack.back().duration;
                            global_stack.pop_back();
                        }
                        break;
                    case atonal::kOpTempo: {
                        if (auto arg = take_arg("$102"); arg && *arg > 0) {
                            tempo = static_cast<double>(*arg);
                            comp.tempo.push_back({onset, tempo});
                        }
                        break;
                    }
                    case 70: case 71:
                        if (auto arg = take_arg("$70")) {
                            chord_arg = arg;
                            chord_latched = id == 71;
                        }
                        break;
                    case 72: chord_arg.reset(); chord_latched = false; break;
                    case 73: case 74:
                        if (auto arg = take_arg("$73")) {
                            grace_arg = arg;
                            grace_latched = id == 74;
                        }
                        break;
                    case 75: grace_arg.reset(); grace_latched = false; break;
                    case 110: case 111:
                        if (auto arg = take_arg("$110")) {
                            arpeggio_arg = arg;
                            arpeggio_latched = id == 111;
                        }
                        break;
                    case 112: arpeggio_arg.reset(); arpeggio_latched = false; break;
                    case atonal::kOpPitchAlter:
                        if (auto arg = take_arg("$120")) pending_alter = arg;
                        break;
                    case 61: cresc_next = 1; break;
                    case 62: cresc_dir = 1; break;
                    case 63: if (cresc_dir > 0) cresc_dir = 0; break;
                    case 64: cresc_next = -1; break;
                    case 65: cresc_dir = -1; break;
                    case 66: if (cresc_dir < 0) cresc_dir = 0; break;
                    case 67: artics.one_shot |= kFermata; break;
                    case 68: artics.latched |= kFermata; break;
                    case 69: artics.latched &= ~kFermata; break;
                    default:
                        if (id >= 92 && id <= 99) { dynamic = id - 91; break; }
                        if (id >= 9 && id <= 11) { articulation_triplet(id, 9, kLegato, artics); break; }
                        if (id >= 12 && id <= 14) { articulation_triplet(id, 12, kPortato, artics); break; }
                        if (id >= 15 && id <= 17) { articulation_triplet(id, 15, kStaccato, artics); break; }
                        if (id >= 18 && id <= 20) { articulation_triplet(id, 18, kAccento, artics); break; }
                        if (id >= 21 && id <= 23) { articulation_triplet(id, 21, kTenuto, artics); break; }
                        if (id >= 30 && id <= 47) {
                            const int slot = (id - 30) / 3;
                            articulation_triplet(id, 30 + slot * 3, 1u << slot, effects);
                            break;
                        }
                        if (id >= 113 && id <= 115) { articulation_triplet(id, 113, kMordent, artics); break; }
                        if (id >= 116 && id <= 118) { articulation_triplet(id, 116, kInvertedMordent, artics); break; }
                        warn("operator $" + std::to_string(id) + " has no interpretation effect");
                        break;
                }
                break;
            }
        }
    }
    if (property_arg) warn("trailing property argument @" + std::to_string(*property_arg) + " discarded");

    comp.sort_notes();
    comp.meta.initial_defaults = {
        {"tempo", std::to_string(defaults.tempo_bpm)},
        {"dynamic", std::to_string(defaults.dynamic)},
        {"initialPitch", std::to_string(defaults.initial_pitch)},
    };
    comp.meta.development_summary =
        "atonal interpretation of " + std::to_string(seq.size()) + " symbols";
    return result;
}

}  // namespace gram::interpret
