#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gram/atonal/genome.h"
#include "gram/core/composition.h"
#include "gram/style/style.h"
#include "gram/tonal/genome.h"

namespace gram::fitness {

struct Verdict {
    std::string family;
    std::string rule_id;
    bool pass = true;
    double measured = 0.0;
    double bound_lo = 0.0;
    double bound_hi = 0.0;
    std::string detail;
};

struct Report {
    bool accepted = true;
    std::vector<Verdict> verdicts;

    void add(std::vector<Verdict> more);
};

// --- structure rules over a unit-type sequence ---
struct PositionalRule {
    enum class Kind { NeverRightBefore, NeverRightAfter, ForbiddenPosition, RequiredPosition };
    Kind kind = Kind::RequiredPosition;
    int x = 0;         // subject unit type
    int y = 0;         // other unit type (kinds 1-2)
    int position = 1;  // 1-based (kinds 3-4)
};

std::vector<Verdict> check_structure_sequence(const std::vector<int>& sequence,
                                              const std::vector<PositionalRule>& rules);

/// Structure counts of a genome against the style's allowed options.
std::vector<Verdict> check_structure(const tonal::Genome& genome, const style::StyleSpec& style);

std::vector<Verdict> check_duration(const Composition& comp, double total_lo, double total_hi,
                                    std::optional<double> period_lo = std::nullopt,
                                    std::optional<double> period_hi = std::nullopt);

/// Simultaneous sounding-track count against a density curve sampled on
/// normalized time.
std::vector<Verdict> check_texture(const Composition& comp, const std::vector<double>& curve,
                                   double tolerance,
                                   const std::vector<int>& role_group = {});

/// Mean dynamic level (1..8) of the sounding notes against a curve.
std::vector<Verdict> check_dynamics(const Composition& comp, const std::vector<double>& curve,
                                    double tolerance);

inline constexpr std::array<double, 12> kDefaultDissonanceWeights = {
    0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1};

/// Windowed dissonance: weighted count of simultaneous chromatic interval
/// classes across instruments, window stride = half the window length.
std::vector<Verdict> check_harmony_atonal(const Composition& comp, double window_beats,
                                          const std::array<double, 12>& weights, double lo,
                                          double hi);

std::vector<Verdict> check_harmony_tonal(const Composition& comp, const style::StyleSpec& style);

/// Windowed note-onset activity per window within bounds.
std::vector<Verdict> check_rhythm_atonal(const Composition& comp, double window_beats, double lo,
                                         double hi);

/// Every measure's duration sequence must be one of the role's patterns;
/// copy-rhythm roles must mirror their source track.
std::vector<Verdict> check_rhythm_tonal(const Composition& comp, const style::StyleSpec& style);

std::vector<Verdict> check_roles(const Composition& comp,
                                 const std::vector<style::RoleRule>& rules);

/// The style's mandatory/forbidden/density texture rules per period type.
std::vector<Verdict> check_texture_rules(const Composition& comp, const style::StyleSpec& style);

/// Full tonal evaluation: genome-level checks first, phenotype checks after.
Report evaluate(const tonal::Genome& genome, const Composition& comp,
                const style::StyleSpec& style);

struct AtonalParams {
    double duration_lo = 0.0;
    double duration_hi = 1e9;
    double window_beats = 4.0;
    std::array<double, 12> dissonance_weights = kDefaultDissonanceWeights;
    double dissonance_lo = 0.0;
    double dissonance_hi = 1e9;
    double rhythm_lo = 0.0;
    double rhythm_hi = 1e9;
    std::vector<double> texture_curve;  // empty = skip
    double texture_tolerance = 1e9;
};

Report evaluate_atonal(const atonal::Genome& genome, const Composition& comp,
                       const AtonalParams& params);

}  // namespace gram::fitness
