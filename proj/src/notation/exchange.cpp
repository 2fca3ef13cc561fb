#include "gram/notation/exchange.h"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "gram/core/errors.h"

namespace gram::notation {

namespace {

/// Instrument presence sampled over a fixed grid of the timeline.
constexpr int kTextureSamples = 16;

}  // namespace

std::string to_exchange(const Composition& comp) {
    nlohmann::ordered_json doc;
    doc["name"] = comp.meta.name;
    doc["style"] = comp.meta.style_name;
    doc["tags"] = comp.meta.tags;

    nlohmann::ordered_json effects = nlohmann::ordered_json::array();
    for (const auto& track : comp.tracks) {
        nlohmann::ordered_json entry;
        entry["instrument"] = track.instrument_name;
        entry["effects"] = track.effects_config;
        effects.push_back(entry);
    }
    doc["trackEffects"] = effects;

    nlohmann::ordered_json hierarchy;
    static const char* kLevelNames[] = {"composition", "periods", "phrases", "ideas"};
    hierarchy["composition"] = 1;
    for (int level = 1; level <= 3; ++level) {
        const auto units = comp.units_of_level(level);
        if (units.empty()) continue;
        int distinct = 0;
        for (const auto& u : units) distinct = std::max(distinct, u.type_id + 1);
        nlohmann::ordered_json entry;
        entry["count"] = units.size();
        entry["distinct"] = distinct;
        hierarchy[kLevelNames[level]] = entry;
    }
    doc["structuralHierarchy"] = hierarchy;

    doc["bpm"] = comp.initial_bpm;

    const Rational total = comp.total_beats();
    nlohmann::ordered_json texture = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < comp.tracks.size(); ++t) {
        if (comp.tracks[t].is_rest_track) continue;
        nlohmann::ordered_json row;
        row["instrument"] = comp.tracks[t].instrument_name;
        std::vector<int> presence(kTextureSamples, 0);
        if (total > Rational(0)) {
            for (int s = 0; s < kTextureSamples; ++s) {
                const Rational at = total * Rational(2 * s + 1) / Rational(2 * kTextureSamples);
                presence[static_cast<std::size_t>(s)] = simultaneous_at(comp, t, at) > 0 ? 1 : 0;
            }
        }
        row["presence"] = presence;
        texture.push_back(row);
    }
    doc["texturalEvolution"] = texture;

    const int beats = std::max(1, comp.beats_per_measure);
    const double measures = total.to_double() / beats;
    doc["numMeasures"] = static_cast<int>(measures + 0.999999);

    return doc.dump(2) + "\n";
}

void write_exchange_file(const Composition& comp, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << to_exchange(comp);
}

}  // namespace gram::notation
