#include "gram/core/instruments.h"

namespace gram {

const std::vector<Instrument>& instrument_table() {
    static const std::vector<Instrument> table = {
        {0,  "piano",           0,  21, 108, 40, 96, 10},
        {1,  "church organ",    19, 36, 96,  48, 84, 10},
        {2,  "cello",           42, 36, 76,  40, 69, 2},
        {3,  "violin",          40, 55, 103, 62, 91, 2},
        {4,  "double bass",     43, 28, 67,  33, 55, 2},
        {5,  "flute",           73, 60, 96,  65, 91, 1},
        {6,  "clarinet",        71, 50, 94,  55, 87, 1},
        {7,  "acoustic guitar", 24, 40, 88,  45, 76, 6},
        {8,  "electric piano",  4,  28, 103, 40, 96, 10},
        {9,  "bass guitar",     33, 28, 67,  33, 57, 2},
        {10, "electric guitar", 27, 40, 88,  45, 79, 6},
        {11, "string pad",      48, 36, 96,  48, 84, 8},
        {12, "synth pad",       88, 36, 96,  48, 84, 8},
        {13, "vibraphone",      11, 53, 89,  57, 84, 4},
        {14, "drum kit",        0,  35, 81,  35, 81, 6},
        {15, "horn",            60, 41, 77,  48, 72, 1},
    };
    return table;
}

const Instrument& instrument_by_id(int id) {
    static const Instrument rest{kRestInstrument, "rest", 0, 0, 127, 0, 127, 0};
    const auto& table = instrument_table();
    if (id < 0 || id >= static_cast<int>(table.size())) return rest;
    return table[static_cast<std::size_t>(id)];
}

const Instrument* instrument_by_program(int midi_program) {
    for (const auto& ins : instrument_table())
        if (ins.midi_program == midi_program) return &ins;
    return nullptr;
}

}  // namespace gram
