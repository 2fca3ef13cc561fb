#pragma once

#include <string>
#include <vector>

#include "gram/atonal/genome.h"
#include "gram/core/composition.h"
#include "gram/tonal/genome.h"

namespace gram::interpret {

/// Error handling during interpretation. Strict raises the declared
/// domain errors; lenient degrades to warnings so that arbitrarily
/// mutated genomes still reach a playable composition.
enum class Mode { Strict, Lenient };

struct Options {
    Mode mode = Mode::Strict;
};

/// Input parameters of the atonal model that live outside the genotype.
struct AtonalDefaults {
    double tempo_bpm = 80.0;
    int dynamic = 4;        // mezzo-piano
    int initial_pitch = 60; // middle C
};

struct Result {
    Composition composition;
    std::vector<std::string> warnings;
};

/// Chord table used to resolve the tonal M operator. Intervals are
/// semitones above the root.
struct ChordShape {
    std::string name;
    std::vector<int> intervals;
};

struct HarmonyTables {
    std::vector<ChordShape> chords = {
        {"major triad", {0, 4, 7}},
        {"minor triad", {0, 3, 7}},
        {"sus2", {0, 2, 7}},
        {"maj9", {0, 4, 7, 11, 14}},
        {"dominant 7th", {0, 4, 7, 10}},
        {"minor 7th", {0, 3, 7, 10}},
    };
};

Result interpret_atonal(const atonal::SymbolString& seq, const atonal::Genome& genome,
                        const AtonalDefaults& defaults = {}, const Options& options = {});

Result interpret_tonal(const tonal::SymbolString& seq, const tonal::Genome& genome,
                       const HarmonyTables& tables = {}, const Options& options = {});

}  // namespace gram::interpret
