#pragma once

#include <string>

#include "gram/core/composition.h"

namespace gram::notation {

/// JSON meta-information document: composition name, style, tags, the
/// per-track effects, the hierarchy of structural entities, global BPM,
/// the textural evolution of instruments and the number of measures.
std::string to_exchange(const Composition& comp);

void write_exchange_file(const Composition& comp, const std::string& path);

}  // namespace gram::notation
