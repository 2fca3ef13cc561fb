#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gram/core/rational.h"

namespace gram {

/// Articulation / ornament flags carried on a note.
enum Articulation : std::uint32_t {
    kLegato = 1u << 0,
    kPortato = 1u << 1,
    kStaccato = 1u << 2,
    kAccento = 1u << 3,
    kTenuto = 1u << 4,
    kFermata = 1u << 5,
    kMordent = 1u << 6,
    kInvertedMordent = 1u << 7,
    kGrace = 1u << 8,
    kArpeggio = 1u << 9,
    kTie = 1u << 10,
};

/// Generic instrumental effects (effect1..effect6 of the genome alphabet).
enum Effect : std::uint32_t {
    kEffect1 = 1u << 0,
    kEffect2 = 1u << 1,
    kEffect3 = 1u << 2,
    kEffect4 = 1u << 3,
    kEffect5 = 1u << 4,
    kEffect6 = 1u << 5,
};

/// One event of the note matrix. Dynamics use the eight macro levels
/// 1..8 (ppp..fff); velocity is the realized MIDI value.
struct Note {
    Rational onset;            // beats from composition start
    Rational duration;         // beats, > 0
    bool is_rest = false;
    int pitch = 60;            // MIDI pitch, meaningful when !is_rest
    int dynamic = 4;           // 1..8
    int velocity = 64;         // 0..127
    std::uint32_t articulations = 0;
    std::uint32_t effects = 0;
    std::vector<std::string> directions;  // subjective text directions

    Rational end() const { return onset + duration; }
};

/// Per-track record of the internal representation.
struct TrackInfo {
    std::string instrument_name;
    int role_id = 0;
    int instrument_id = 0;       // index into the instrument registry, or kRestInstrument
    int instrument_type_id = 0;
    int synth_index = 0;
    std::vector<std::string> effects_config;
    int midi_program = 0;
    int tessitura_lo = 0;
    int tessitura_hi = 127;
    int sweet_lo = 0;
    int sweet_hi = 127;
    int velocity_lo = 16;
    int velocity_hi = 126;
    int max_polyphony = 8;
    bool is_rest_track = false;
};

/// A structural unit (period / phrase / idea) with its beat span.
/// level 1 = period, 2 = phrase, 3 = idea. type_id distinguishes the
/// distinct units of one level; instance counts repeats.
struct StructureUnit {
    int level = 1;
    int type_id = 0;
    int instance = 0;
    Rational start;
    Rational end;
};

/// Tempo change point (beats -> BPM from that point on).
struct TempoEvent {
    Rational beat;
    double bpm = 120.0;
};

/// Harmonic annotation recorded when a chord operator resolves.
struct HarmonyEvent {
    Rational beat;
    int root = 0;   // harmonic root, in scale degrees
    int chord = 0;  // index into the style's chord table
    int track = -1;
};

/// Global fields and metadata of the internal representation.
struct CompositionMeta {
    std::string name;
    std::string id;
    std::string style_name;
    std::string author = "gramophone";
    std::string creation_date;
    std::map<std::string, std::string> input_instantiation;
    std::string development_summary;
    std::string texture_structure;
    std::vector<std::string> tags;
    std::map<std::string, std::string> initial_defaults;
    std::vector<std::string> output_formats;
};

/// The explicit internal representation: metadata, track records and the
/// 3-D note structure (track x time-ordered events x properties).
struct Composition {
    CompositionMeta meta;
    std::vector<TrackInfo> tracks;
    std::vector<std::vector<Note>> notes;  // notes[t] sorted by onset
    std::vector<TempoEvent> tempo;         // sorted by beat; never empty after interpret
    std::vector<StructureUnit> structure;  // sorted by (level, start)
    std::vector<HarmonyEvent> harmony;     // sorted by beat
    double initial_bpm = 120.0;
    int beats_per_measure = 4;

    std::size_t track_count() const { return tracks.size(); }
    bool empty() const;

    /// Tracks holding at least one sounding (non-rest) note.
    std::vector<std::size_t> sounding_tracks() const;

    /// Last event end over all tracks, in beats.
    Rational total_beats() const;

    /// Converts a beat position to seconds through the tempo map.
    double beats_to_seconds(const Rational& beat) const;
    double total_seconds() const { return beats_to_seconds(total_beats()); }

    void sort_notes();

    /// Units of one structural level, sorted by start.
    std::vector<StructureUnit> units_of_level(int level) const;
};

/// Number of sounding notes covering beat position `beat` on `track`.
int simultaneous_at(const Composition& comp, std::size_t track, const Rational& beat);

}  // namespace gram
