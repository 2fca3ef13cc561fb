#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gram/core/composition.h"

namespace gram::analysis {

/// Fixed-order feature vector spanning instrumentation, texture, rhythm,
/// dynamics, pitch statistics, melody and chords. The name list defines
/// the order; histograms are normalized to sum 1 when notes exist.
struct FeatureVector {
    std::vector<double> values;

    static const std::vector<std::string>& names();
    static std::size_t size() { return names().size(); }

    double operator[](std::size_t i) const { return values[i]; }
    bool operator==(const FeatureVector&) const = default;
};

FeatureVector extract_features(const Composition& comp);

/// Same extraction over a Standard MIDI File; the MIDI path and the
/// internal path agree for exported compositions.
FeatureVector extract_features_midi(const std::vector<std::uint8_t>& midi_bytes);

FeatureVector centroid(const std::vector<FeatureVector>& vectors);

}  // namespace gram::analysis
