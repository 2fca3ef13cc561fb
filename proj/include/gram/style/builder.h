#pragma once

#include <cstdint>
#include <optional>

#include "gram/core/rng.h"
#include "gram/style/style.h"
#include "gram/tonal/genome.h"

namespace gram::style {

/// Draws a genome whose structure counts, roles, instruments, scales,
/// chords, progressions and rhythmic patterns all come from the style's
/// allowed sets. Deterministic per seed.
tonal::Genome build_random_genome(const StyleSpec& style, std::uint64_t seed);

/// Per-version overrides for the parameters left free by phase 1.
struct VersionParams {
    std::optional<double> tempo;
    std::optional<std::vector<int>> roles;  // role family ids to keep
    std::optional<int> dynamic;             // 0..7
};

struct HypersongStylePlan {
    std::vector<std::string> free_parameters;  // subset of {"tempo","roles","dynamic"}
    std::vector<VersionParams> versions;
};

/// Two-phase instantiation: phase 1 pins every parameter not listed as
/// free (shared across versions); phase 2 yields one fully pinned style
/// per version entry.
std::vector<StyleSpec> instantiate_hypersong_styles(const StyleSpec& style,
                                                    const HypersongStylePlan& plan,
                                                    std::uint64_t seed);

}  // namespace gram::style
