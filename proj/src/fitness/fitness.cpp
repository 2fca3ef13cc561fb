#include "gram/fitness/fitness.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gram/core/scale.h"

namespace gram::fitness {

namespace {

int floor_mod(int a, int b) { const int m = a % b; return m < 0 ? m + b : m; }

Verdict verdict(const std::string& family, const std::string& rule_id, bool pass,
                double measured, double lo, double hi, std::string detail = "") {
    return {family, rule_id, pass, measured, lo, hi, std::move(detail)};
}

/// Sounding notes of a track covering a beat instant.
bool track_sounds_at(const Composition& comp, std::size_t t, const Rational& beat) {
    return simultaneous_at(comp, t, beat) > 0;
}

std::vector<Rational> normalized_samples(const Composition& comp, std::size_t count) {
    std::vector<Rational> out;
    const Rational total = comp.total_beats();
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(total * Rational(static_cast<std::int64_t>(2 * i + 1),
                                       static_cast<std::int64_t>(2 * count)));
    return out;
}

}  // namespace

void Report::add(std::vector<Verdict> more) {
    for (auto& v : more) {
        if (!v.pass) accepted = false;
        verdicts.push_back(std::move(v));
    }
}

std::vector<Verdict> check_structure_sequence(const std::vector<int>& sequence,
                                              const std::vector<PositionalRule>& rules) {
    std::vector<Verdict> out;
    const int n = static_cast<int>(sequence.size());
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const PositionalRule& rule = rules[r];
        bool pass = true;
        std::string detail;
        switch (rule.kind) {
            case PositionalRule::Kind::NeverRightBefore:
                for (int i = 0; i + 1 < n; ++i)
                    if (sequence[static_cast<std::size_t>(i)] == rule.x &&
                        sequence[static_cast<std::size_t>(i + 1)] == rule.y) {
                        pass = false;
                        detail = "at position " + std::to_string(i + 1);
                    }
                break;
            case PositionalRule::Kind::NeverRightAfter:
                for (int i = 1; i < n; ++i)
                    if (sequence[static_cast<std::size_t>(i)] == rule.x &&
                        sequence[static_cast<std::size_t>(i - 1)] == rule.y) {
                        pass = false;
                        detail = "at position " + std::to_string(i + 1);
                    }
                break;
            case PositionalRule::Kind::ForbiddenPosition:
                if (rule.position >= 1 && rule.position <= n &&
                    sequence[static_cast<std::size_t>(rule.position - 1)] == rule.x)
                    pass = false;
                break;
            case PositionalRule::Kind::RequiredPosition:
                pass = rule.position >= 1 && rule.position <= n &&
                       sequence[static_cast<std::size_t>(rule.position - 1)] == rule.x;
                break;
        }
        out.push_back(verdict("structure", "positional." + std::to_string(r), pass,
                              pass ? 1 : 0, 1, 1, detail));
    }
    return out;
}

std::vector<Verdict> check_structure(const tonal::Genome& genome,
                                     const style::StyleSpec& style) {
    std::vector<Verdict> out;
    const auto contains = [](const std::vector<int>& options, int v) {
        return std::find(options.begin(), options.end(), v) != options.end();
    };
    // Period count and distinct periods from the axiom rule.
    int periods = 0;
    std::set<int> distinct;
    for (const auto& s : genome.levels[0][0].rhs)
        if (s.kind == tonal::Symbol::Kind::NonTerminal) {
            ++periods;
            distinct.insert(s.ref);
        }
    out.push_back(verdict("structure", "periods", contains(style.structure[0].children, periods),
                          periods, style.structure[0].children.front(),
                          style.structure[0].children.back()));
    out.push_back(verdict("structure", "distinctPeriods",
                          contains(style.structure[0].distinct, static_cast<int>(distinct.size())),
                          static_cast<double>(distinct.size()), 0, 0));
    if (genome.level_count() > 1) {
        for (std::size_t p = 0; p < genome.levels[1].size(); ++p) {
            int phrases = 0;
            for (const auto& s : genome.levels[1][p].rhs)
                if (s.kind == tonal::Symbol::Kind::NonTerminal) ++phrases;
            out.push_back(verdict("structure", "phrases." + std::to_string(p),
                                  contains(style.structure[1].children, phrases), phrases, 0, 0));
        }
    }
    return out;
}

std::vector<Verdict> check_duration(const Composition& comp, double total_lo, double total_hi,
                                    std::optional<double> period_lo,
                                    std::optional<double> period_hi) {
    std::vector<Verdict> out;
    const double total = comp.total_seconds();
    out.push_back(verdict("duration", "total", total >= total_lo && total <= total_hi, total,
                          total_lo, total_hi));
    if (period_lo && period_hi) {
        const auto periods = comp.units_of_level(1);
        for (std::size_t i = 0; i < periods.size(); ++i) {
            const double seconds = comp.beats_to_seconds(periods[i].end) -
                                   comp.beats_to_seconds(periods[i].start);
            out.push_back(verdict("duration", "period." + std::to_string(i),
                                  seconds >= *period_lo && seconds <= *period_hi, seconds,
                                  *period_lo, *period_hi));
        }
    }
    return out;
}

std::vector<Verdict> check_texture(const Composition& comp, const std::vector<double>& curve,
                                   double tolerance, const std::vector<int>& role_group) {
    std::vector<Verdict> out;
    const auto samples = normalized_samples(comp, curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        int count = 0;
        for (std::size_t t = 0; t < comp.track_count(); ++t) {
            if (comp.tracks[t].is_rest_track) continue;
            if (!role_group.empty() &&
                std::find(role_group.begin(), role_group.end(), comp.tracks[t].role_id) ==
                    role_group.end())
                continue;
            if (track_sounds_at(comp, t, samples[i])) ++count;
        }
        const bool pass = std::abs(count - curve[i]) <= tolerance;
        out.push_back(verdict("texture", "sample." + std::to_string(i), pass, count,
                              curve[i] - tolerance, curve[i] + tolerance));
    }
    return out;
}

std::vector<Verdict> check_dynamics(const Composition& comp, const std::vector<double>& curve,
                                    double tolerance) {
    std::vector<Verdict> out;
    const auto samples = normalized_samples(comp, curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        double sum = 0;
        int count = 0;
        for (std::size_t t = 0; t < comp.track_count(); ++t)
            for (const Note& n : comp.notes[t])
                if (!n.is_rest && n.onset <= samples[i] && samples[i] < n.end()) {
                    sum += n.dynamic;
                    ++count;
                }
        const double mean = count ? sum / count : 0.0;
        const bool pass = std::abs(mean - curve[i]) <= tolerance;
        out.push_back(verdict("dynamics", "sample." + std::to_string(i), pass, mean,
                              curve[i] - tolerance, curve[i] + tolerance));
    }
    return out;
}

std::vector<Verdict> check_harmony_atonal(const Composition& comp, double window_beats,
                                          const std::array<double, 12>& weights, double lo,
                                          double hi) {
    std::vector<Verdict> out;
    const double total = comp.total_beats().to_double();
    const double stride = window_beats / 2.0;
    int index = 0;
    for (double t = 0.0; t == 0.0 || t < total; t += stride, ++index) {
        const double w_lo = t, w_hi = t + window_beats;
        double score = 0.0;
        // All sounding-note pairs from different tracks that overlap each
        // other inside the window.
        for (std::size_t ta = 0; ta < comp.track_count(); ++ta)
            for (std::size_t tb = ta + 1; tb < comp.track_count(); ++tb)
                for (const Note& a : comp.notes[ta]) {
                    if (a.is_rest) continue;
                    const double a_on = a.onset.to_double(), a_off = a.end().to_double();
                    if (a_off <= w_lo || a_on >= w_hi) continue;
                    for (const Note& b : comp.notes[tb]) {
                        if (b.is_rest) continue;
                        const double b_on = b.onset.to_double(), b_off = b.end().to_double();
                        if (b_off <= w_lo || b_on >= w_hi) continue;
                        if (a_on < b_off && b_on < a_off)
                            score += weights[static_cast<std::size_t>(
                                floor_mod(std::abs(a.pitch - b.pitch), 12))];
                    }
                }
        out.push_back(verdict("harmony", "window." + std::to_string(index),
                              score >= lo && score <= hi, score, lo, hi));
        if (total <= window_beats) break;
    }
    return out;
}

std::vector<Verdict> check_harmony_tonal(const Composition& comp,
                                         const style::StyleSpec& style) {
    std::vector<Verdict> out;
    const int scale_size = scale_by_id(0).size();

    // (a)+(b): membership of chords and roots.
    bool chords_ok = true, roots_ok = true;
    std::string chord_detail, root_detail;
    for (const auto& ev : comp.harmony) {
        if (ev.chord < 0 || ev.chord >= static_cast<int>(style.chords.size())) {
            chords_ok = false;
            chord_detail = "chord " + std::to_string(ev.chord);
        }
        if (!style.valid_roots.empty()) {
            const int root = floor_mod(ev.root, scale_size);
            if (std::find(style.valid_roots.begin(), style.valid_roots.end(), root) ==
                style.valid_roots.end()) {
                roots_ok = false;
                root_detail = "root " + std::to_string(root);
            }
        }
    }
    out.push_back(verdict("harmony", "validChords", chords_ok, chords_ok, 1, 1, chord_detail));
    out.push_back(verdict("harmony", "validRoots", roots_ok, roots_ok, 1, 1, root_detail));

    // (c): transitions along the beat-ordered harmony states. A transition
    // is allowed when it appears consecutively (cyclically) in some
    // progression, repeats in place, or restarts a progression.
    std::vector<std::pair<int, int>> states;  // (root mod scale, chord)
    {
        std::vector<HarmonyEvent> events = comp.harmony;
        std::sort(events.begin(), events.end(),
                  [](const HarmonyEvent& a, const HarmonyEvent& b) { return a.beat < b.beat; });
        for (const auto& ev : events) {
            const std::pair<int, int> state{floor_mod(ev.root, scale_size), ev.chord};
            if (states.empty() || states.back() != state) states.push_back(state);
        }
    }
    std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> allowed;
    std::set<std::pair<int, int>> starts;
    for (const auto& progression : style.progressions) {
        if (progression.empty()) continue;
        starts.insert({floor_mod(progression[0].root_degree, scale_size), progression[0].chord});
        for (std::size_t i = 0; i < progression.size(); ++i) {
            const auto& a = progression[i];
            const auto& b = progression[(i + 1) % progression.size()];
            allowed.insert({{floor_mod(a.root_degree, scale_size), a.chord},
                            {floor_mod(b.root_degree, scale_size), b.chord}});
        }
    }
    bool transitions_ok = true;
    std::string transition_detail;
    if (!style.progressions.empty()) {
        for (std::size_t i = 0; i + 1 < states.size(); ++i) {
            const auto pair = std::make_pair(states[i], states[i + 1]);
            if (allowed.count(pair) || starts.count(states[i + 1])) continue;
            transitions_ok = false;
            transition_detail = "(" + std::to_string(states[i].first) + "," +
                                std::to_string(states[i].second) + ")->(" +
                                std::to_string(states[i + 1].first) + "," +
                                std::to_string(states[i + 1].second) + ")";
            break;
        }
    }
    out.push_back(
        verdict("harmony", "transitions", transitions_ok, transitions_ok, 1, 1, transition_detail));

    // (d): copy-harmony roles mirror the bass within the same measure.
    const int beats = std::max(1, comp.beats_per_measure);
    for (const auto& role : style.roles) {
        if (!role.copy_harmony_from_bass) continue;
        bool ok = true;
        for (const auto& ev : comp.harmony) {
            if (ev.track < 0 || ev.track >= static_cast<int>(comp.tracks.size())) continue;
            if (comp.tracks[static_cast<std::size_t>(ev.track)].role_id != role.role) continue;
            const long measure = static_cast<long>(ev.beat.to_double() / beats);
            bool matched = false;
            for (const auto& bass_ev : comp.harmony) {
                if (bass_ev.track < 0 ||
                    comp.tracks[static_cast<std::size_t>(bass_ev.track)].role_id != style::kBass)
                    continue;
                if (static_cast<long>(bass_ev.beat.to_double() / beats) != measure) continue;
                if (floor_mod(bass_ev.root, scale_size) == floor_mod(ev.root, scale_size) &&
                    bass_ev.chord == ev.chord) {
                    matched = true;
                    break;
                }
            }
            if (!matched) { ok = false; break; }
        }
        out.push_back(verdict("harmony", "copyHarmony.role" + std::to_string(role.role), ok, ok,
                              1, 1));
    }

    // dissonance rules between role groups
    for (std::size_t r = 0; r < style.dissonance_rules.size(); ++r) {
        const auto& rule = style.dissonance_rules[r];
        bool ok = true;
        for (std::size_t ta = 0; ta < comp.track_count() && ok; ++ta) {
            if (std::find(rule.roles_a.begin(), rule.roles_a.end(), comp.tracks[ta].role_id) ==
                rule.roles_a.end())
                continue;
            for (std::size_t tb = 0; tb < comp.track_count() && ok; ++tb) {
                if (tb == ta) continue;
                if (std::find(rule.roles_b.begin(), rule.roles_b.end(),
                              comp.tracks[tb].role_id) == rule.roles_b.end())
                    continue;
                for (const Note& a : comp.notes[ta]) {
                    if (a.is_rest) continue;
                    for (const Note& b : comp.notes[tb]) {
                        if (b.is_rest) continue;
                        if (a.onset < b.end() && b.onset < a.end()) {
                            const int ic = floor_mod(std::abs(a.pitch - b.pitch), 12);
                            if (std::find(rule.intervals.begin(), rule.intervals.end(), ic) !=
                                rule.intervals.end()) {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if (!ok) break;
                }
            }
        }
        out.push_back(verdict("harmony", "dissonance." + std::to_string(r), ok, ok, 1, 1));
    }
    return out;
}

std::vector<Verdict> check_rhythm_atonal(const Composition& comp, double window_beats, double lo,
                                         double hi) {
    std::vector<Verdict> out;
    const double total = comp.total_beats().to_double();
    const double stride = window_beats / 2.0;
    int index = 0;
    for (double t = 0.0; t == 0.0 || t < total; t += stride, ++index) {
        int onsets = 0;
        for (std::size_t track = 0; track < comp.track_count(); ++track)
            for (const Note& n : comp.notes[track]) {
                if (n.is_rest) continue;
                const double on = n.onset.to_double();
                if (on >= t && on < t + window_beats) ++onsets;
            }
        out.push_back(verdict("rhythm", "window." + std::to_string(index),
                              onsets >= lo && onsets <= hi, onsets, lo, hi));
        if (total <= window_beats) break;
    }
    return out;
}

namespace {

/// Duration sequence (rests negative) of one track within a measure.
/// Simultaneous chord tones collapse into a single rhythmic event.
std::vector<Rational> measure_durations(const Composition& comp, std::size_t track,
                                        long measure) {
    const int beats = std::max(1, comp.beats_per_measure);
    const Rational lo(measure * beats);
    const Rational hi((measure + 1) * beats);
    std::vector<Rational> out;
    std::optional<Rational> last_onset;
    for (const Note& n : comp.notes[track]) {
        if (n.onset < lo || n.onset >= hi) continue;
        if (last_onset && n.onset == *last_onset) continue;
        last_onset = n.onset;
        out.push_back(n.is_rest ? -n.duration : n.duration);
    }
    return out;
}

}  // namespace

std::vector<Verdict> check_rhythm_tonal(const Composition& comp, const style::StyleSpec& style) {
    std::vector<Verdict> out;
    const int beats = std::max(1, comp.beats_per_measure);
    const long measures =
        static_cast<long>((comp.total_beats().to_double() + beats - 1e-9) / beats);
    for (const auto& role : style.roles) {
        if (role.patterns.empty() && role.copy_rhythm_from < 0) continue;
        for (std::size_t track = 0; track < comp.track_count(); ++track) {
            if (comp.tracks[track].role_id != role.role || comp.tracks[track].is_rest_track)
                continue;
            bool ok = true;
            std::string detail;
            for (long m = 0; m < measures && ok; ++m) {
                const auto durations = measure_durations(comp, track, m);
                if (durations.empty()) continue;  // silent measure
                if (role.copy_rhythm_from >= 0) {
                    // Mirror the source role's duration sequence.
                    bool matched = false;
                    for (std::size_t src = 0; src < comp.track_count(); ++src) {
                        if (comp.tracks[src].role_id != role.copy_rhythm_from) continue;
                        if (measure_durations(comp, src, m) == durations) { matched = true; break; }
                    }
                    if (!matched) { ok = false; detail = "measure " + std::to_string(m + 1); }
                    continue;
                }
                bool matched = false;
                for (const auto& pattern : role.patterns) {
                    // Compare against the pattern, ignoring a trailing pad rest.
                    std::vector<Rational> wanted = pattern.durations;
                    if (wanted == durations) { matched = true; break; }
                    if (!durations.empty() && durations.back() < Rational(0)) {
                        std::vector<Rational> trimmed(durations.begin(), durations.end() - 1);
                        if (wanted == trimmed) { matched = true; break; }
                    }
                }
                if (!matched) { ok = false; detail = "measure " + std::to_string(m + 1); }
            }
            out.push_back(verdict("rhythm",
                                  "patterns.role" + std::to_string(role.role) + ".track" +
                                      std::to_string(track),
                                  ok, ok, 1, 1, detail));
        }
    }
    return out;
}

std::vector<Verdict> check_roles(const Composition& comp,
                                 const std::vector<style::RoleRule>& rules) {
    std::vector<Verdict> out;
    const auto first_onset = [&](int role) -> std::optional<Rational> {
        std::optional<Rational> best;
        for (std::size_t t = 0; t < comp.track_count(); ++t) {
            if (comp.tracks[t].role_id != role) continue;
            for (const Note& n : comp.notes[t])
                if (!n.is_rest && (!best || n.onset < *best)) best = n.onset;
        }
        return best;
    };
    const auto role_sounds_at = [&](int role, const Rational& beat) {
        for (std::size_t t = 0; t < comp.track_count(); ++t)
            if (comp.tracks[t].role_id == role && track_sounds_at(comp, t, beat)) return true;
        return false;
    };

    for (std::size_t r = 0; r < rules.size(); ++r) {
        const auto& rule = rules[r];
        bool pass = true;
        std::string detail;
        switch (rule.kind) {
            case style::RoleRule::Kind::NeverTogether:
            case style::RoleRule::Kind::OnlyWith: {
                for (std::size_t t = 0; t < comp.track_count() && pass; ++t) {
                    if (comp.tracks[t].role_id != rule.role_a) continue;
                    for (const Note& n : comp.notes[t]) {
                        if (n.is_rest) continue;
                        // Sample the note's span at its midpoint and edges.
                        for (const Rational& at :
                             {n.onset, (n.onset + n.end()) / Rational(2)}) {
                            const bool b_playing = role_sounds_at(rule.role_b, at);
                            if (rule.kind == style::RoleRule::Kind::NeverTogether && b_playing) {
                                pass = false;
                                detail = "overlap at beat " + at.str();
                            }
                            if (rule.kind == style::RoleRule::Kind::OnlyWith && !b_playing) {
                                pass = false;
                                detail = "uncovered at beat " + at.str();
                            }
                        }
                        if (!pass) break;
                    }
                }
                break;
            }
            case style::RoleRule::Kind::NeverStartTogether: {
                const auto a = first_onset(rule.role_a);
                const auto b = first_onset(rule.role_b);
                if (a && b && *a == *b) { pass = false; detail = "both start at " + a->str(); }
                break;
            }
            case style::RoleRule::Kind::RequiresBefore: {
                const auto a = first_onset(rule.role_a);
                const auto b = first_onset(rule.role_b);
                if (a && (!b || !(*b < *a))) {
                    pass = false;
                    detail = "no earlier entry of role " + std::to_string(rule.role_b);
                }
                break;
            }
        }
        out.push_back(verdict("roles", "rule." + std::to_string(r), pass, pass, 1, 1, detail));
    }
    return out;
}

std::vector<Verdict> check_texture_rules(const Composition& comp,
                                         const style::StyleSpec& style) {
    std::vector<Verdict> out;
    const auto periods = comp.units_of_level(1);
    const auto role_sounds_in = [&](int role, const StructureUnit& unit) {
        for (std::size_t t = 0; t < comp.track_count(); ++t) {
            if (comp.tracks[t].role_id != role) continue;
            for (const Note& n : comp.notes[t])
                if (!n.is_rest && n.onset < unit.end && n.end() > unit.start) return true;
        }
        return false;
    };
    for (std::size_t r = 0; r < style.texture_rules.size(); ++r) {
        const auto& rule = style.texture_rules[r];
        bool pass = true;
        std::string detail;
        for (const auto& unit : periods) {
            if (unit.type_id != rule.period_type) continue;
            if (rule.kind == style::TextureRule::Kind::Mandatory && !role_sounds_in(rule.role, unit)) {
                pass = false;
                detail = "missing in period instance " + std::to_string(unit.instance);
            }
            if (rule.kind == style::TextureRule::Kind::Forbidden && role_sounds_in(rule.role, unit)) {
                pass = false;
                detail = "present in period instance " + std::to_string(unit.instance);
            }
            if (rule.kind == style::TextureRule::Kind::Density) {
                int sounding = 0;
                std::set<int> seen;
                for (const auto& role_spec : style.roles) {
                    if (seen.count(role_spec.role)) continue;
                    seen.insert(role_spec.role);
                    if (role_sounds_in(role_spec.role, unit)) ++sounding;
                }
                if (std::abs(sounding - rule.density) > rule.tolerance + 1e-9) {
                    pass = false;
                    detail = "density " + std::to_string(sounding) + " in period instance " +
                             std::to_string(unit.instance);
                }
            }
        }
        out.push_back(verdict("texture", "rule." + std::to_string(r), pass, pass, 1, 1, detail));
    }
    return out;
}

Report evaluate(const tonal::Genome& genome, const Composition& comp,
                const style::StyleSpec& style) {
    Report report;
    report.add(check_structure(genome, style));
    report.add(check_duration(comp, style.duration_total_lo, style.duration_total_hi,
                              style.duration_period_lo, style.duration_period_hi));
    report.add(check_harmony_tonal(comp, style));
    report.add(check_rhythm_tonal(comp, style));
    report.add(check_roles(comp, style.role_rules));
    report.add(check_texture_rules(comp, style));
    return report;
}

Report evaluate_atonal(const atonal::Genome& genome, const Composition& comp,
                       const AtonalParams& params) {
    (void)genome;
    Report report;
    report.add(check_duration(comp, params.duration_lo, params.duration_hi));
    report.add(check_harmony_atonal(comp, params.window_beats, params.dissonance_weights,
                                    params.dissonance_lo, params.dissonance_hi));
    report.add(
        check_rhythm_atonal(comp, params.window_beats, params.rhythm_lo, params.rhythm_hi));
    if (!params.texture_curve.empty())
        report.add(check_texture(comp, params.texture_curve, params.texture_tolerance));
    return report;
}

}  // namespace gram::fitness
