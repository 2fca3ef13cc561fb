#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gram/core/composition.h"
#include "gram/style/builder.h"

namespace gram::hypersong {

/// One time-slice of a version: notes re-based to the fragment start,
/// plus the trailing silence that lets sounding notes decay.
struct Fragment {
    Composition content;
    Rational nominal_beats{0};
    double nominal_seconds = 0.0;
    double tail_seconds = 1.5;
};

struct Manifest {
    std::string meta_theme_prefix;
    int version_count = 0;
    int fragment_count = 0;
    double tail_seconds = 1.5;
    std::vector<std::vector<double>> fragment_seconds;  // [version][fragment]
};

/// Versions x fragments bundle sharing one structure.
struct Hypersong {
    std::vector<Composition> versions;
    std::vector<std::vector<Fragment>> fragments;  // rectangular
    Manifest manifest;
};

/// Cuts a composition at its top-level structural boundaries. Never
/// splits inside a unit; raises NoStructure when the composition carries
/// no structural annotations.
std::vector<Fragment> fragment(const Composition& comp, double tail_seconds = 1.5);

struct GenerateOptions {
    double tail_seconds = 1.5;
    std::string name_prefix = "hypersong";
};

/// One composition per version from a shared meta-instantiation; all
/// versions are structurally congruent, so the fragment matrix is
/// rectangular by construction.
Hypersong generate_hypersong(const style::StyleSpec& style,
                             const style::HypersongStylePlan& plan, std::uint64_t seed,
                             const GenerateOptions& options = {});

/// Writes manifest.json plus one MIDI file per fragment, named
/// "<prefix>_v<version>_f<fragment>.mid".
void write_bundle(const Hypersong& song, const std::string& directory);

std::string manifest_json(const Hypersong& song);

}  // namespace gram::hypersong
