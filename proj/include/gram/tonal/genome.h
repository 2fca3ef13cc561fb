#pragma once

#include <string>
#include <vector>

#include "gram/core/rational.h"

namespace gram::tonal {

/// One symbol of the tonal alphabet (reserved operators of the ".evg"
/// notation plus non-terminals, instrument symbols and the internal
/// markers produced during development).
struct Symbol {
    enum class Kind {
        PitchUp,        // N: pitch and harmonic root +1
        PitchDown,      // n
        ToneUp,         // T: chromatic tone shift +1
        ToneDown,       // t
        DurUp,          // R: duration +step
        DurDown,        // r
        Push,           // [: save pitch/root/duration
        Pop,            // ]
        PushTime,       // <: save time position as well
        PopTime,        // >
        Chord,          // M index.notes.shift.behavior
        Accent,         // v accent
        Dynamic,        // W origin.target
        RhythmAlter,    // C role.position.type
        NoteRestFlip,   // V role.position.type
        PitchAlter,     // p role.position.n.t
        Window,         // w start.end (clips the next rewrite)
        Suppress,       // X role (mutes a role in the next rewrite)
        Anacrusis,      // Y durTotal.durAnacrusis
        Extended,       // $ code.args...
        NonTerminal,
        Instrument,
        // internal markers, never part of the surface syntax
        UnitBegin,      // args = {level, type_id, instance}
        UnitEnd,
        SuppressBegin,  // args = {role}
        SuppressEnd,
    };

    Kind kind = Kind::PitchUp;
    std::vector<int> args;
    int ref = -1;    // non-terminal ordinal or track index
    int level = -1;  // rule-set level owning a non-terminal
    char name = 0;   // display character, not part of equality

    static Symbol simple(Kind k) { return Symbol{k, {}, -1, -1, 0}; }
    static Symbol with_args(Kind k, std::vector<int> a) { return Symbol{k, std::move(a), -1, -1, 0}; }
    static Symbol nonterminal(int lvl, int ordinal, char display) {
        return Symbol{Kind::NonTerminal, {}, ordinal, lvl, display};
    }
    static Symbol instrument(int track, char display) {
        return Symbol{Kind::Instrument, {}, track, -1, display};
    }

    bool operator==(const Symbol& o) const {
        return kind == o.kind && args == o.args && ref == o.ref && level == o.level;
    }
};

using SymbolString = std::vector<Symbol>;

/// Expected argument count for a parametric operator kind; -1 if the kind
/// takes no argument list.
int operator_arity(Symbol::Kind kind);

/// Extended "$ code,args" operations registered by the engine.
enum ExtendedCode : int {
    kExtTempo = 0,  // $0.<bpm>
    kExtMode = 1,   // $1.<mode id>
    kExtChord = 2,  // $2.<chord id>
    kExtTie = 3,    // $3 (tie next note)
};
bool is_registered_extended(int code, int arg_count);

struct Globals {
    int initial_dynamic = 3;   // 0..7 (0 = ppp)
    double initial_tempo = 120.0;
    int initial_chord = 0;     // index into the style's chord table
    int initial_mode = 0;      // scale table id
    Rational base_duration{1};
    Rational duration_step{1, 2};
    int style_id = 0;

    bool operator==(const Globals&) const = default;
};

struct TrackSpec {
    int midi_program = 0;
    int initial_pitch = 60;
    int tessitura_lo = 0;
    int tessitura_hi = 127;
    int velocity_lo = 16;
    int velocity_hi = 126;
    int role_id = 0;
    int instrument_id = 0;  // kRestInstrument marks the rest pseudo-track
    char symbol = 'a';      // display only, not part of equality

    bool operator==(const TrackSpec& o) const {
        return midi_program == o.midi_program && initial_pitch == o.initial_pitch &&
               tessitura_lo == o.tessitura_lo && tessitura_hi == o.tessitura_hi &&
               velocity_lo == o.velocity_lo && velocity_hi == o.velocity_hi &&
               role_id == o.role_id && instrument_id == o.instrument_id;
    }
};

struct Rule {
    char name = 0;  // display character, not persisted semantics
    SymbolString rhs;

    bool operator==(const Rule& o) const { return rhs == o.rhs; }
};

/// Context-free genome with the strict downward hierarchy. levels[0]
/// holds the axiom's single rule; a non-terminal of level d resolves to
/// levels[d][ordinal] where ordinals follow first appearance in level d-1.
struct Genome {
    Globals globals;
    std::vector<TrackSpec> tracks;
    std::vector<std::vector<Rule>> levels;

    bool operator==(const Genome& o) const {
        return globals == o.globals && tracks == o.tracks && levels == o.levels;
    }

    int level_count() const { return static_cast<int>(levels.size()); }
    void validate() const;
};

/// Reads the ".evg" layout: levels separated by "|", sections by ";".
/// The first level carries the globals section and one section per track.
Genome parse_evg(const std::string& text);
Genome parse_evg_file(const std::string& path);

std::string serialize_evg(const Genome& genome);

/// Renders a symbol string in surface notation; internal markers are
/// skipped so developed strings compare against printed derivations.
std::string render(const Genome& genome, const SymbolString& symbols);

/// Reorders non-terminal ordinals and track sections to match first
/// appearance, the order the positional ".evg" layout implies. Programmatic
/// construction and the genetic operators call this so serialization
/// round-trips structurally.
void canonicalize(Genome& genome);

}  // namespace gram::tonal
