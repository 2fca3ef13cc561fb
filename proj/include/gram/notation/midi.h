#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gram/core/composition.h"

namespace gram::notation {

inline constexpr int kPulsesPerQuarter = 480;

/// Standard MIDI File format 1: one tempo/conductor track plus one track
/// per composition track. Velocities come from the note records, program
/// changes from each track's midi_program.
std::vector<std::uint8_t> to_midi(const Composition& comp);

void write_midi_file(const Composition& comp, const std::string& path);

// --- independent parse-back, used for analysis and round-trip checks ---

struct MidiNote {
    long on_tick = 0;
    long off_tick = 0;
    int key = 0;
    int velocity = 0;
    int channel = 0;
};

struct MidiTrack {
    int program = -1;  // first program change seen, -1 if none
    std::vector<MidiNote> notes;
};

struct MidiTempo {
    long tick = 0;
    long usec_per_quarter = 500000;
};

struct ParsedMidi {
    int format = 1;
    int division = kPulsesPerQuarter;
    std::vector<MidiTrack> tracks;
    std::vector<MidiTempo> tempos;
};

/// Minimal SMF reader (running status, meta and sysex aware). Raises
/// ParseError on malformed input.
ParsedMidi parse_midi(const std::vector<std::uint8_t>& bytes);
ParsedMidi parse_midi_file(const std::string& path);

long beat_to_tick(const Rational& beat);

}  // namespace gram::notation
