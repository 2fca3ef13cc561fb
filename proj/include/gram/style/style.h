#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gram/interpret/interpret.h"

namespace gram::style {

/// Role families of the registry. The runtime treats the id as opaque;
/// generators specialize material per family.
enum RoleFamily : int {
    kMelody = 0,
    kHomophony = 1,
    kCounterpoint = 2,
    kChords = 3,
    kBass = 4,
    kPads = 5,
    kArpeggios = 6,
    kOstinati = 7,
    kDrums = 8,
    kPercussion = 9,
    kFx = 10,
};

const std::vector<std::string>& role_family_names();

struct InstrumentChoice {
    int instrument_id = 0;
    double probability = 1.0;
    std::optional<int> tessitura_lo;
    std::optional<int> tessitura_hi;
    std::optional<int> sweet_lo;
    std::optional<int> sweet_hi;
};

struct RhythmPattern {
    std::vector<Rational> durations;  // beats; sums to the measure length
    double probability = 1.0;
};

struct RoleSpec {
    int role = kMelody;
    std::vector<InstrumentChoice> instruments;
    std::vector<RhythmPattern> patterns;
    bool copy_harmony_from_bass = false;
    int copy_rhythm_from = -1;  // role id whose note/rest durations to mirror
};

struct ScaleChoice {
    int mode_id = 0;  // scale table index
    int key_pc = 0;   // tonic pitch class
};

struct ChordDef {
    std::string name;
    std::vector<int> intervals;  // semitones above the root
};

struct ProgressionStep {
    int root_degree = 0;
    int chord = 0;  // index into chords
};

struct DissonanceRule {
    std::vector<int> roles_a;
    std::vector<int> roles_b;
    std::vector<int> intervals;  // forbidden interval classes, semitones
};

struct RhythmicMode {
    int beats_per_measure = 4;
    std::vector<int> accents;  // one strength entry per beat
};

/// Texture rule kinds: role mandatory/forbidden in a period type, or a
/// density request for a period type.
struct TextureRule {
    enum class Kind { Mandatory, Forbidden, Density } kind = Kind::Mandatory;
    int role = kMelody;
    int period_type = 0;
    double density = 1.0;
    double tolerance = 0.0;
};

/// Co-occurrence constraints between roles (§-style rule letters a..d).
struct RoleRule {
    enum class Kind { NeverTogether, OnlyWith, NeverStartTogether, RequiresBefore } kind =
        Kind::OnlyWith;
    int role_a = 0;
    int role_b = 0;
};

struct StructureOptions {
    std::vector<int> children;  // allowed child counts
    std::vector<int> distinct;  // allowed distinct unit counts
};

struct SpecialPeriod {
    std::string name;
    enum class Placement { AfterFirst, AfterSecond, NeverLast } placement = Placement::AfterFirst;
};

struct ArpeggioConfig {
    std::string contour = "up";  // chord | up | down | up-down
    std::vector<Rational> segment_durations;
    int octave_scope = 1;
    bool tie_notes = false;
};

/// The style questionnaire: every constraint the generator may draw from
/// and the fitness function checks against.
struct StyleSpec {
    std::string name;
    // structure[0] = periods per composition, [1] = phrases per period,
    // [2] = ideas per phrase
    std::vector<StructureOptions> structure;
    double duration_total_lo = 0.0;    // seconds
    double duration_total_hi = 1e9;
    std::optional<double> duration_period_lo;
    std::optional<double> duration_period_hi;
    std::vector<double> tempo_options;
    std::vector<int> dynamic_options;  // 0..7
    std::vector<RoleSpec> roles;
    ArpeggioConfig arpeggio;
    std::vector<std::pair<int, int>> rhythmic_incompatibilities;  // instrument id pairs
    std::vector<ScaleChoice> scales;
    std::vector<ChordDef> chords;
    std::vector<int> valid_roots;  // scale degrees
    std::vector<std::vector<ProgressionStep>> progressions;
    std::vector<DissonanceRule> dissonance_rules;
    std::vector<RhythmicMode> rhythmic_modes;
    std::vector<std::pair<int, double>> melodic_intervals;  // (scale steps, weight)
    std::vector<TextureRule> texture_rules;
    std::vector<RoleRule> role_rules;
    std::vector<int> alteration_intensity;  // max alteration count per level
    std::vector<SpecialPeriod> special_periods;

    void validate() const;  // SchemaError / ConsistencyError

    interpret::HarmonyTables harmony_tables() const;
};

StyleSpec load_style(const std::string& json_text);
StyleSpec load_style_file(const std::string& path);
std::string save_style(const StyleSpec& style);

/// Stable content hash, recorded in run manifests.
std::string style_hash(const StyleSpec& style);

}  // namespace gram::style
