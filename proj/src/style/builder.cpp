#include "gram/style/builder.h"

#include <algorithm>
#include <map>
#include <set>

#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/core/scale.h"

namespace gram::style {

namespace {

using tonal::Symbol;

constexpr const char* kNonTerminalPool = "ABDEFGHIJKLOPQSU";
constexpr const char* kInstrumentPool = "abcdefghijklmoqu";

int floor_mod(int a, int b) { const int m = a % b; return m < 0 ? m + b : m; }

int nearest_with_pc(int pc, int reference) {
    int best = pc;
    for (int candidate = pc; candidate <= 127; candidate += 12)
        if (std::abs(candidate - reference) < std::abs(best - reference)) best = candidate;
    return best;
}

template <typename T>
T pick_option(Rng& rng, const std::vector<T>& options, const char* what) {
    if (options.empty()) throw InfeasibleStyle(std::string("no options for ") + what);
    return rng.pick(options);
}

const InstrumentChoice& pick_instrument(Rng& rng, const RoleSpec& role) {
    std::vector<double> weights;
    for (const auto& choice : role.instruments) weights.push_back(choice.probability);
    return role.instruments[rng.weighted_index(weights)];
}

const RhythmPattern& pick_pattern(Rng& rng, const RoleSpec& role,
                                  const RhythmPattern& fallback) {
    if (role.patterns.empty()) return fallback;
    std::vector<double> weights;
    for (const auto& p : role.patterns) weights.push_back(p.probability);
    return role.patterns[rng.weighted_index(weights)];
}

/// Arrangement of `slots` unit instances over `distinct` types, new types
/// introduced in order so ordinals match first appearance.
std::vector<int> arrange(Rng& rng, int slots, int distinct) {
    distinct = std::min(distinct, slots);
    std::vector<int> out;
    int introduced = 0;
    for (int i = 0; i < slots; ++i) {
        const int remaining = slots - i;
        const int missing = distinct - introduced;
        if (missing >= remaining) {  // must introduce the rest now
            out.push_back(introduced++);
            continue;
        }
        // Index `introduced` stands for "introduce a new type".
        const int hi = introduced < distinct ? introduced : introduced - 1;
        const int choice = static_cast<int>(rng.uniform_int(0, hi));
        if (choice == introduced)
            out.push_back(introduced++);
        else
            out.push_back(choice);
    }
    return out;
}

void append_moves(tonal::SymbolString& rhs, int delta) {
    for (int i = 0; i < delta; ++i) rhs.push_back(Symbol::simple(Symbol::Kind::PitchUp));
    for (int i = 0; i < -delta; ++i) rhs.push_back(Symbol::simple(Symbol::Kind::PitchDown));
}

/// Emits R/r operators moving the running duration from `current` to
/// `target` in duration-step units; updates `current`.
void append_duration_ops(tonal::SymbolString& rhs, Rational& current, const Rational& target,
                         const Rational& step) {
    if (target == current || step <= Rational(0)) return;
    const Rational diff = target - current;
    const Rational count = diff / step;
    // Non-integral gaps round toward the nearest reachable value.
    std::int64_t k = (2 * count.num() + (count.num() >= 0 ? count.den() : -count.den())) /
                     (2 * count.den());
    for (std::int64_t i = 0; i < k; ++i) rhs.push_back(Symbol::simple(Symbol::Kind::DurUp));
    for (std::int64_t i = 0; i < -k; ++i) rhs.push_back(Symbol::simple(Symbol::Kind::DurDown));
    current += step * Rational(k);
}

struct BuildContext {
    const StyleSpec& style;
    Rng& rng;
    tonal::Genome& genome;
    std::vector<ProgressionStep> progression;
    RhythmicMode mode;
    ScaleChoice scale;
    std::vector<std::size_t> role_tracks;  // track index per style role
    int rest_track = -1;
};

/// Note material of one role for one idea, spanning exactly one measure.
tonal::SymbolString role_material(BuildContext& ctx, std::size_t role_index,
                                  const ProgressionStep& step) {
    const RoleSpec& role = ctx.style.roles[role_index];
    const int track = static_cast<int>(ctx.role_tracks[role_index]);
    const char track_char = ctx.genome.tracks[static_cast<std::size_t>(track)].symbol;
    const char rest_char = ctx.genome.tracks[static_cast<std::size_t>(ctx.rest_track)].symbol;
    const Rational measure(ctx.mode.beats_per_measure);
    const Rational dstep = ctx.genome.globals.duration_step;

    static const RhythmPattern kFallback{{Rational(1), Rational(1), Rational(1), Rational(1)}, 1.0};
    RhythmPattern pattern = pick_pattern(ctx.rng, role, kFallback);
    // Pad or trim the pattern to the measure.
    Rational total(0);
    std::vector<Rational> durations;
    for (const Rational& d : pattern.durations) {
        const Rational len = abs(d);
        if (total + len > measure) break;
        durations.push_back(d);
        total += len;
    }
    if (total < measure) durations.push_back(-(measure - total));  // pad with a rest

    tonal::SymbolString rhs;
    Rational current = ctx.genome.globals.base_duration;
    const auto emit_note = [&](const Rational& dur, bool rest, bool chordal, int mask) {
        append_duration_ops(rhs, current, dur, dstep);
        if (rest) {
            rhs.push_back(Symbol::instrument(ctx.rest_track, rest_char));
            return;
        }
        if (chordal)
            rhs.push_back(Symbol::with_args(Symbol::Kind::Chord, {step.chord, mask, 0, 0}));
        rhs.push_back(Symbol::instrument(track, track_char));
    };

    switch (role.role) {
        case kBass:
            for (const Rational& d : durations) emit_note(abs(d), d < Rational(0), true, 0);
            break;
        case kChords:
        case kPads:
            for (const Rational& d : durations) emit_note(abs(d), d < Rational(0), true, 7);
            break;
        case kArpeggios: {
            // Arpeggio contour over single chord tones.
            std::vector<int> masks;
            if (ctx.style.arpeggio.contour == "down") masks = {4, 2, 1};
            else if (ctx.style.arpeggio.contour == "up-down") masks = {1, 2, 4, 2};
            else if (ctx.style.arpeggio.contour == "chord") masks = {7};
            else masks = {1, 2, 4};
            std::size_t m = 0;
            for (const Rational& d : durations) {
                emit_note(abs(d), d < Rational(0), true, masks[m % masks.size()]);
                if (d >= Rational(0)) ++m;
            }
            break;
        }
        case kDrums:
        case kPercussion: {
            int beat = 0;
            for (const Rational& d : durations) {
                const bool strong = beat < static_cast<int>(ctx.mode.accents.size()) &&
                                    ctx.mode.accents[static_cast<std::size_t>(beat)] == 1;
                if (d >= Rational(0) && strong)
                    rhs.push_back(Symbol::with_args(Symbol::Kind::Accent, {1}));
                emit_note(abs(d), d < Rational(0), false, 0);
                beat = static_cast<int>((Rational(beat) + abs(d)).to_double());
            }
            break;
        }
        default: {  // melody, homophony, counterpoint, ostinati, fx
            int drift = 0;
            for (const Rational& d : durations) {
                if (d >= Rational(0) && !ctx.style.melodic_intervals.empty()) {
                    std::vector<double> weights;
                    for (const auto& [s, w] : ctx.style.melodic_intervals) weights.push_back(w);
                    const int interval =
                        ctx.style.melodic_intervals[ctx.rng.weighted_index(weights)].first;
                    // Keep the line near its register.
                    int bounded = interval;
                    if (drift + bounded > 5) bounded = -std::abs(bounded);
                    if (drift + bounded < -5) bounded = std::abs(bounded);
                    append_moves(rhs, bounded);
                    drift += bounded;
                }
                emit_note(abs(d), d < Rational(0), false, 0);
            }
            break;
        }
    }
    return rhs;
}

}  // namespace

tonal::Genome build_random_genome(const StyleSpec& style, std::uint64_t seed) {
    style.validate();
    Rng rng(seed);
    tonal::Genome genome;

    const RhythmicMode mode = pick_option(rng, style.rhythmic_modes, "rhythmic modes");
    const ScaleChoice scale = pick_option(rng, style.scales, "scales");
    const double tempo = pick_option(rng, style.tempo_options, "tempo");
    const int dynamic = pick_option(rng, style.dynamic_options, "dynamics");
    std::vector<ProgressionStep> progression =
        style.progressions.empty() ? std::vector<ProgressionStep>{{0, 0}}
                                   : pick_option(rng, style.progressions, "progressions");

    genome.globals.initial_dynamic = dynamic;
    genome.globals.initial_tempo = tempo;
    genome.globals.initial_chord = progression.front().chord;
    genome.globals.initial_mode = scale.mode_id;
    genome.globals.base_duration = Rational(1);
    genome.globals.duration_step = Rational(1, 2);
    genome.globals.style_id = 0;

    // Tracks: one per role, in style order, plus the rest pseudo-track.
    BuildContext ctx{style, rng, genome, progression, mode, scale, {}, -1};
    for (std::size_t r = 0; r < style.roles.size(); ++r) {
        const auto& choice = pick_instrument(rng, style.roles[r]);
        const Instrument& ins = instrument_by_id(choice.instrument_id);
        tonal::TrackSpec track;
        track.midi_program = ins.midi_program;
        track.tessitura_lo = choice.tessitura_lo.value_or(ins.tessitura_lo);
        track.tessitura_hi = choice.tessitura_hi.value_or(ins.tessitura_hi);
        const int sweet_lo = choice.sweet_lo.value_or(ins.sweet_lo);
        const int sweet_hi = choice.sweet_hi.value_or(ins.sweet_hi);
        track.initial_pitch = nearest_with_pc(scale.key_pc, (sweet_lo + sweet_hi) / 2);
        track.velocity_lo = 40;
        track.velocity_hi = 110;
        track.role_id = style.roles[r].role;
        track.instrument_id = choice.instrument_id;
        track.symbol = kInstrumentPool[r % 16];
        ctx.role_tracks.push_back(genome.tracks.size());
        genome.tracks.push_back(track);
    }
    {
        tonal::TrackSpec rest;
        rest.instrument_id = kRestInstrument;
        rest.role_id = -1;
        rest.symbol = 's';
        rest.initial_pitch = 60;
        ctx.rest_track = static_cast<int>(genome.tracks.size());
        genome.tracks.push_back(rest);
    }

    // Structure counts.
    const int periods = pick_option(rng, style.structure[0].children, "periods");
    const int distinct_periods =
        std::min(pick_option(rng, style.structure[0].distinct, "distinct periods"), periods);
    const std::vector<int> period_pattern = arrange(rng, periods, distinct_periods);

    // Roles suppressed per period type (texture rules).
    std::vector<std::set<int>> suppressed(static_cast<std::size_t>(distinct_periods));
    for (const auto& rule : style.texture_rules) {
        if (rule.period_type < 0 || rule.period_type >= distinct_periods) continue;
        if (rule.kind == TextureRule::Kind::Forbidden)
            suppressed[static_cast<std::size_t>(rule.period_type)].insert(rule.role);
        if (rule.kind == TextureRule::Kind::Density) {
            // Keep roughly `density` roles: melody and mandatory roles first.
            std::vector<int> candidates;
            for (const auto& role : style.roles)
                if (role.role != kMelody) candidates.push_back(role.role);
            rng.shuffle(candidates);
            const int keep = std::max(1, static_cast<int>(rule.density + 0.5));
            int playing = static_cast<int>(style.roles.size());
            for (int role : candidates) {
                if (playing <= keep) break;
                bool mandatory = false;
                for (const auto& t : style.texture_rules)
                    if (t.kind == TextureRule::Kind::Mandatory && t.role == role &&
                        t.period_type == rule.period_type)
                        mandatory = true;
                if (mandatory) continue;
                suppressed[static_cast<std::size_t>(rule.period_type)].insert(role);
                --playing;
            }
        }
    }

    // Level 0: the axiom — macro-dynamic, then the bracketed period row.
    // Pitch alterations between units move in whole octaves (scale-size
    // steps) so the harmonic root stays on the style's root table.
    const int octave_steps = scale_by_id(scale.mode_id).size();
    const int max_alter =
        style.alteration_intensity.empty() ? 0 : style.alteration_intensity[0];
    genome.levels.resize(1);
    tonal::Rule axiom;
    axiom.name = 'Z';
    axiom.rhs.push_back(Symbol::with_args(Symbol::Kind::Dynamic, {dynamic, 0}));
    axiom.rhs.push_back(Symbol::simple(Symbol::Kind::Push));
    for (std::size_t i = 0; i < period_pattern.size(); ++i) {
        if (i > 0 && max_alter > 0) {
            const int k = static_cast<int>(rng.uniform_int(0, std::min(max_alter, 1)));
            append_moves(axiom.rhs, (rng.chance(0.5) ? k : -k) * octave_steps);
        }
        const int type = period_pattern[i];
        for (int role : suppressed[static_cast<std::size_t>(type)])
            axiom.rhs.push_back(Symbol::with_args(Symbol::Kind::Suppress, {role}));
        axiom.rhs.push_back(
            Symbol::nonterminal(1, type, kNonTerminalPool[static_cast<std::size_t>(type) % 16]));
    }
    axiom.rhs.push_back(Symbol::simple(Symbol::Kind::Pop));
    genome.levels[0].push_back(std::move(axiom));

    // Ideas are pooled per period type so the display-character space
    // (17 usable letters per level) is never exhausted.
    std::vector<int> idea_base(static_cast<std::size_t>(distinct_periods), 0);
    std::vector<int> idea_distinct(static_cast<std::size_t>(distinct_periods), 1);
    int idea_total = 0;
    for (int p = 0; p < distinct_periods; ++p) {
        idea_base[static_cast<std::size_t>(p)] = idea_total;
        const int d = std::max(1, pick_option(rng, style.structure[2].distinct, "distinct ideas"));
        idea_distinct[static_cast<std::size_t>(p)] = d;
        idea_total += d;
    }
    if (idea_total > 16 || distinct_periods > 16)
        throw InfeasibleStyle("too many distinct units for the single-character symbol space");

    // Level 1: periods -> phrases.
    genome.levels.emplace_back();
    int phrase_type_base = 0;
    std::vector<int> phrase_period;  // phrase ordinal -> owning period type
    for (int p = 0; p < distinct_periods; ++p) {
        const int phrases = pick_option(rng, style.structure[1].children, "phrases");
        const int distinct_phrases =
            std::min(pick_option(rng, style.structure[1].distinct, "distinct phrases"), phrases);
        const auto pattern = arrange(rng, phrases, distinct_phrases);
        tonal::Rule rule;
        rule.name = kNonTerminalPool[static_cast<std::size_t>(p) % 16];
        rule.rhs.push_back(Symbol::simple(Symbol::Kind::Push));
        const int alter1 =
            style.alteration_intensity.size() > 1 ? style.alteration_intensity[1] : 0;
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            if (i > 0 && alter1 > 0 && rng.chance(0.3))
                append_moves(rule.rhs, (rng.chance(0.5) ? 1 : -1) * octave_steps);
            const int ordinal = phrase_type_base + pattern[i];
            rule.rhs.push_back(Symbol::nonterminal(
                2, ordinal, kNonTerminalPool[static_cast<std::size_t>(ordinal) % 16]));
        }
        rule.rhs.push_back(Symbol::simple(Symbol::Kind::Pop));
        genome.levels[1].push_back(std::move(rule));
        for (int j = 0; j < distinct_phrases; ++j) phrase_period.push_back(p);
        phrase_type_base += distinct_phrases;
    }
    if (phrase_type_base > 16)
        throw InfeasibleStyle("too many distinct phrases for the single-character symbol space");

    // Level 2: phrases -> ideas, walking the chord progression.
    genome.levels.emplace_back();
    std::vector<ProgressionStep> idea_steps(static_cast<std::size_t>(idea_total));
    for (int f = 0; f < phrase_type_base; ++f) {
        const int period_type = phrase_period[static_cast<std::size_t>(f)];
        const int base = idea_base[static_cast<std::size_t>(period_type)];
        const int d = idea_distinct[static_cast<std::size_t>(period_type)];
        const int ideas = std::max(d, pick_option(rng, style.structure[2].children, "ideas"));
        tonal::Rule rule;
        rule.name = kNonTerminalPool[static_cast<std::size_t>(f) % 16];
        rule.rhs.push_back(Symbol::simple(Symbol::Kind::Push));
        int current_root = 0;
        for (int i = 0; i < ideas; ++i) {
            const int type = i % d;
            const ProgressionStep step =
                progression[static_cast<std::size_t>(type) % progression.size()];
            append_moves(rule.rhs, step.root_degree - current_root);
            current_root = step.root_degree;
            const int ordinal = base + type;
            idea_steps[static_cast<std::size_t>(ordinal)] = step;
            rule.rhs.push_back(Symbol::nonterminal(
                3, ordinal, kNonTerminalPool[static_cast<std::size_t>(ordinal) % 16]));
        }
        rule.rhs.push_back(Symbol::simple(Symbol::Kind::Pop));
        genome.levels[2].push_back(std::move(rule));
    }

    // Level 3: ideas -> notes, one measure of polyphonic material. Every
    // role is enclosed in <,> so melodic drift stays local; a closing
    // measure-length rest is what advances the clock, which keeps every
    // idea exactly one measure long.
    genome.levels.emplace_back();
    for (int ordinal = 0; ordinal < idea_total; ++ordinal) {
        const ProgressionStep step = idea_steps[static_cast<std::size_t>(ordinal)];
        tonal::Rule rule;
        rule.name = kNonTerminalPool[static_cast<std::size_t>(ordinal) % 16];
        for (std::size_t r = 0; r < style.roles.size(); ++r) {
            const auto material = role_material(ctx, r, step);
            rule.rhs.push_back(Symbol::simple(Symbol::Kind::PushTime));
            rule.rhs.insert(rule.rhs.end(), material.begin(), material.end());
            rule.rhs.push_back(Symbol::simple(Symbol::Kind::PopTime));
        }
        rule.rhs.push_back(Symbol::simple(Symbol::Kind::Push));
        Rational current = genome.globals.base_duration;
        append_duration_ops(rule.rhs, current, Rational(mode.beats_per_measure),
                            genome.globals.duration_step);
        rule.rhs.push_back(Symbol::instrument(
            ctx.rest_track, genome.tracks[static_cast<std::size_t>(ctx.rest_track)].symbol));
        rule.rhs.push_back(Symbol::simple(Symbol::Kind::Pop));
        genome.levels[3].push_back(std::move(rule));
    }

    tonal::canonicalize(genome);
    genome.validate();
    return genome;
}

std::vector<StyleSpec> instantiate_hypersong_styles(const StyleSpec& style,
                                                    const HypersongStylePlan& plan,
                                                    std::uint64_t seed) {
    style.validate();
    const auto is_free = [&](const char* name) {
        return std::find(plan.free_parameters.begin(), plan.free_parameters.end(), name) !=
               plan.free_parameters.end();
    };
    for (const auto& name : plan.free_parameters)
        if (name != "tempo" && name != "roles" && name != "dynamic")
            throw ParameterMismatch("unknown free parameter \"" + name + "\"");

    // Phase 1: pin everything that is not left free.
    Rng rng(seed);
    StyleSpec meta = style;
    const auto pin = [&](auto& options) {
        if (!options.empty()) options = {rng.pick(options)};
    };
    for (auto& level : meta.structure) { pin(level.children); pin(level.distinct); }
    if (!is_free("tempo")) pin(meta.tempo_options);
    if (!is_free("dynamic")) pin(meta.dynamic_options);
    pin(meta.scales);
    pin(meta.progressions);
    pin(meta.rhythmic_modes);
    for (auto& role : meta.roles) {
        // Collapse instrument choice and pattern choice.
        const auto& choice = pick_instrument(rng, role);
        role.instruments = {choice};
        role.instruments[0].probability = 1.0;
        if (!role.patterns.empty()) {
            std::vector<double> weights;
            for (const auto& p : role.patterns) weights.push_back(p.probability);
            role.patterns = {role.patterns[rng.weighted_index(weights)]};
            role.patterns[0].probability = 1.0;
        }
    }

    // Phase 2: one fully pinned style per version entry.
    std::vector<StyleSpec> out;
    for (std::size_t v = 0; v < plan.versions.size(); ++v) {
        const VersionParams& params = plan.versions[v];
        if (is_free("tempo") != params.tempo.has_value())
            throw ParameterMismatch("version " + std::to_string(v) +
                                    (params.tempo ? " sets tempo, which is not free"
                                                  : " must set the free parameter tempo"));
        if (is_free("roles") != params.roles.has_value())
            throw ParameterMismatch("version " + std::to_string(v) +
                                    (params.roles ? " sets roles, which is not free"
                                                  : " must set the free parameter roles"));
        if (is_free("dynamic") != params.dynamic.has_value())
            throw ParameterMismatch("version " + std::to_string(v) +
                                    (params.dynamic ? " sets dynamic, which is not free"
                                                    : " must set the free parameter dynamic"));
        StyleSpec pinned = meta;
        pinned.name = meta.name + "/v" + std::to_string(v);
        if (params.tempo) pinned.tempo_options = {*params.tempo};
        if (params.dynamic) pinned.dynamic_options = {*params.dynamic};
        if (params.roles) {
            std::vector<RoleSpec> kept;
            for (const auto& role : pinned.roles)
                if (std::find(params.roles->begin(), params.roles->end(), role.role) !=
                    params.roles->end())
                    kept.push_back(role);
            if (kept.empty())
                throw ParameterMismatch("version " + std::to_string(v) + " keeps no roles");
            pinned.roles = std::move(kept);
        }
        out.push_back(std::move(pinned));
    }
    return out;
}

}  // namespace gram::style
