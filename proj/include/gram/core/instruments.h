#pragma once

#include <string>
#include <vector>

namespace gram {

/// Reserved instrument id marking a track that only produces rests.
inline constexpr int kRestInstrument = -1;

/// Physical description of a playable instrument.
struct Instrument {
    int id = 0;
    std::string name;
    int midi_program = 0;     // General MIDI program number
    int tessitura_lo = 0;     // playable MIDI range
    int tessitura_hi = 127;
    int sweet_lo = 48;        // preferred sub-range
    int sweet_hi = 84;
    int max_polyphony = 1;    // simultaneous sounding notes
};

/// Built-in instrument registry indexed by the genomes' instrument_id.
/// Entry order is part of the on-disk genome contract; see README.
const std::vector<Instrument>& instrument_table();

/// Lookup by id; kRestInstrument and unknown ids return a silent entry.
const Instrument& instrument_by_id(int id);

const Instrument* instrument_by_program(int midi_program);

}  // namespace gram
