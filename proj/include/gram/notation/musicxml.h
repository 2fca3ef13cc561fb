#pragma once

#include <string>

#include "gram/core/composition.h"

namespace gram::notation {

/// Minimal score-partwise MusicXML 3.1 document: one part per sounding
/// track, measures of the composition's meter, pitches, durations,
/// dynamics directions and basic articulations.
std::string to_musicxml(const Composition& comp);

void write_musicxml_file(const Composition& comp, const std::string& path);

}  // namespace gram::notation
