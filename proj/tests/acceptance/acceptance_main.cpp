// Acceptance suite: runs every top-level criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gram/adaptive/automaton.h"
#include "gram/analysis/distance.h"
#include "gram/analysis/features.h"
#include "gram/atonal/rewrite.h"
#include "gram/core/errors.h"
#include "gram/core/rng.h"
#include "gram/evolve/evolve.h"
#include "gram/hypersong/hypersong.h"
#include "gram/interpret/clean.h"
#include "gram/interpret/interpret.h"
#include "gram/interpret/stabilize.h"
#include "gram/notation/midi.h"
#include "gram/style/builder.h"
#include "gram/tonal/develop.h"

using namespace gram;

namespace {

std::string g_assets;
int g_failures = 0;

void report(int index, const std::string& title, bool pass, const std::string& detail = "") {
    std::printf("%s criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", index, title.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) ++g_failures;
}

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

atonal::Genome load_ga() { return atonal::parse_gen_file(g_assets + "/g_a.gen"); }
atonal::Genome load_nokia() { return atonal::parse_gen_file(g_assets + "/nokia.gen"); }
tonal::Genome load_gt() { return tonal::parse_evg_file(g_assets + "/g_t.evg"); }
style::StyleSpec ballad() { return style::load_style_file(g_assets + "/styles/guitar_ballad.json"); }
style::StyleSpec relax() { return style::load_style_file(g_assets + "/styles/relax.json"); }

Composition develop_tonal(const tonal::Genome& genome, const style::StyleSpec& style,
                          interpret::Mode mode = interpret::Mode::Lenient) {
    const auto seq = interpret::clean_string(tonal::develop(genome));
    interpret::Options options{mode};
    auto result = interpret::interpret_tonal(seq, genome, style.harmony_tables(), options);
    result.composition.beats_per_measure =
        style.rhythmic_modes.empty() ? 4 : style.rhythmic_modes.front().beats_per_measure;
    return interpret::stabilize(result.composition, {genome.globals.base_duration});
}

// --- criterion 1: golden atonal development ---
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        const auto trace = atonal::rewrite_trace(load_ga());
        c.expect(trace.strings.size() >= 2, "fewer than two iterations");
        if (c.ok) {
            const std::string it1 = atonal::to_text(trace.strings[0]);
            const std::string it2 = atonal::to_text(trace.strings[1]);
            c.expect(it1 == "@60$102$96#2$1$1$1$1$1$1$1#2", "iteration 1 got " + it1);
            c.expect(it2 == "@60$102$96$7#3$8#4$1$1$1$1$1$1$1$7#3$8#4", "iteration 2 got " + it2);
        }
        c.expect(seconds_since(start) < 1.0, "runtime above 1 s");
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(1, "golden atonal development (iterations 1 and 2)", c.ok, c.detail);
}

// --- criterion 2: golden tonal development ---
void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        const auto genome = load_gt();
        const auto trace = tonal::develop_trace(genome);
        c.expect(trace.passes.size() == 4, "expected 4 passes");
        const std::string it1 = tonal::render(genome, trace.passes[0]);
        c.expect(it1 == "W4.0[ANNNNNNNA]B", "iteration 1 got " + it1);

        // Derivational substitution oracle for the remaining passes.
        const auto substitute = [](std::string text,
                                   const std::vector<std::pair<char, std::string>>& rules) {
            std::string out;
            for (char ch : text) {
                bool replaced = false;
                for (const auto& [from, to] : rules)
                    if (ch == from) {
                        out += to;
                        replaced = true;
                        break;
                    }
                if (!replaced) out += ch;
            }
            return out;
        };
        std::string expected = "W4.0[ANNNNNNNA]B";
        expected = substitute(expected, {{'A', "CC"}, {'B', "D"}});
        c.expect(tonal::render(genome, trace.passes[1]) == expected,
                 "iteration 2 disagrees with the substitution oracle");
        expected = substitute(expected, {{'C', "ENEnE"}, {'D', "FFNF"}});
        expected = substitute(expected, {{'E', "<anaNNsa>M0.0.0.0bM0.0.0.0bsM0.0.0.0b"},
                                         {'F', "as[NNNa]a"}});
        c.expect(tonal::render(genome, trace.passes[3]) == expected,
                 "iteration 4 disagrees with the substitution oracle");
        c.expect(seconds_since(start) < 1.0, "runtime above 1 s");
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(2, "golden tonal development (iterations 1 and 4)", c.ok, c.detail);
}

// --- criterion 3: interpretation semantics of the atonal example ---
void criterion_3() {
    Check c;
    try {
        const auto genome = load_ga();
        atonal::RewriteOptions options;
        options.stop_after = 2;
        const auto seq = atonal::rewrite(genome, options);
        const auto comp = interpret::interpret_atonal(seq, genome).composition;
        const auto tracks = comp.sounding_tracks();
        c.expect(tracks.size() == 2, "expected exactly 2 sounding tracks, got " +
                                         std::to_string(tracks.size()));
        if (c.ok) {
            const auto notes_of = [&](std::size_t t) {
                std::vector<Note> out;
                for (const Note& n : comp.notes[t])
                    if (!n.is_rest) out.push_back(n);
                return out;
            };
            const auto first = notes_of(tracks[0]);
            const auto second = notes_of(tracks[1]);
            c.expect(first.size() == second.size() && !first.empty(), "track sizes differ");
            for (std::size_t i = 0; c.ok && i < first.size(); ++i) {
                c.expect(first[i].onset == second[i].onset &&
                             first[i].duration == second[i].duration,
                         "tracks not in strict rhythmic unison");
                c.expect(first[i].pitch == second[i].pitch, "tracks disagree on pitch");
            }
            // Second half: pitches exactly 7 C-major steps (an octave) up.
            const std::size_t half = first.size() / 2;
            for (std::size_t i = 0; c.ok && i < half; ++i)
                c.expect(first[half + i].pitch == first[i].pitch + 12,
                         "second half is not 7 scale steps above the first");
        }
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(3, "atonal interpretation: unison tracks, octave rise", c.ok, c.detail);
}

// --- criterion 4: adaptive timing of the sleep automaton ---
void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        const auto dfa = adaptive::load_dfa_file(g_assets + "/sleep.dfa.json");
        const auto timeline = adaptive::simulate(dfa, {});
        c.expect(timeline.events.size() == 4,
                 "expected 4 timeline events, got " + std::to_string(timeline.events.size()));
        if (c.ok) {
            const double expected_t[3] = {60, 660, 1260};
            const int expected_state[3] = {1, 2, 3};
            for (int i = 0; i < 3; ++i) {
                const auto& ev = timeline.events[static_cast<std::size_t>(i) + 1];
                c.expect(std::abs(ev.t - expected_t[i]) <= 1.0,
                         "transition " + std::to_string(i + 1) + " at t=" + std::to_string(ev.t));
                c.expect(ev.state == expected_state[i], "wrong target state");
            }
            c.expect(timeline.events[1].output && *timeline.events[1].output == 1, "output 1");
            c.expect(timeline.events[2].output && *timeline.events[2].output == 2, "output 2");
            c.expect(!timeline.events[3].output.has_value(), "final output must be null");
            c.expect(timeline.halted, "runtime must halt in the final state");
        }
        c.expect(seconds_since(start) < 0.1, "simulation above 0.1 s");
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(4, "adaptive timing: silent run hits 60 s, 660 s, 1260 s", c.ok, c.detail);
}

// --- criterion 5: robustness sweep over the worked-example genomes ---
void criterion_5() {
    Check c;
    interpret::Options lenient{interpret::Mode::Lenient};
    try {
        // Atonal genomes: 1000 mutations and 500 crossovers each.
        for (const auto& base : {load_ga(), load_nokia()}) {
            Rng rng(1001);
            evolve::MutationConfig config;
            auto current = base;
            for (int i = 0; i < 1000 && c.ok; ++i) {
                current = evolve::mutate_atonal(current, rng, config);
                const auto seq = atonal::rewrite(current);
                auto comp = interpret::interpret_atonal(seq, current, {}, lenient).composition;
                comp = interpret::stabilize(
                    comp, {Rational(static_cast<std::int64_t>(current.base_duration * 1000 + 0.5),
                                    1000)});
                const auto bytes = notation::to_midi(comp);
                c.expect(!bytes.empty(), "empty MIDI");
                for (std::size_t t = 0; t < comp.notes.size() && c.ok; ++t)
                    for (const Note& n : comp.notes[t])
                        if (!n.is_rest)
                            c.expect(n.pitch >= comp.tracks[t].tessitura_lo &&
                                         n.pitch <= comp.tracks[t].tessitura_hi,
                                     "pitch escaped the tessitura after stabilize");
            }
            auto other = base;
            for (int i = 0; i < 5; ++i) other = evolve::mutate_atonal(other, rng, config);
            for (int i = 0; i < 500 && c.ok; ++i) {
                const auto child = evolve::crossover_atonal(current, other, rng);
                const auto seq = atonal::rewrite(child);
                auto comp = interpret::interpret_atonal(seq, child, {}, lenient).composition;
                comp = interpret::stabilize(
                    comp, {Rational(static_cast<std::int64_t>(child.base_duration * 1000 + 0.5),
                                    1000)});
                c.expect(!notation::to_midi(comp).empty(), "empty MIDI from crossover child");
            }
        }
        // Tonal worked example.
        {
            const auto base = load_gt();
            Rng rng(1002);
            evolve::MutationConfig config;
            auto current = base;
            for (int i = 0; i < 1000 && c.ok; ++i) {
                current = evolve::mutate_tonal(current, rng, config);
                const auto seq = tonal::develop(current);
                auto comp = interpret::interpret_tonal(seq, current, {}, lenient).composition;
                comp = interpret::stabilize(comp, {current.globals.base_duration});
                c.expect(!notation::to_midi(comp).empty(), "empty MIDI from tonal mutant");
                for (std::size_t t = 0; t < comp.notes.size() && c.ok; ++t)
                    for (const Note& n : comp.notes[t])
                        if (!n.is_rest)
                            c.expect(n.pitch >= comp.tracks[t].tessitura_lo &&
                                         n.pitch <= comp.tracks[t].tessitura_hi,
                                     "tonal pitch escaped the tessitura");
            }
            auto other = base;
            for (int i = 0; i < 5; ++i) other = evolve::mutate_tonal(other, rng, config);
            for (int i = 0; i < 500 && c.ok; ++i) {
                const auto child = evolve::crossover_tonal(current, other, rng);
                const auto seq = tonal::develop(child);
                auto comp = interpret::interpret_tonal(seq, child, {}, lenient).composition;
                comp = interpret::stabilize(comp, {child.globals.base_duration});
                c.expect(!notation::to_midi(comp).empty(), "empty MIDI from tonal crossover");
            }
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("undeclared error: ") + e.what());
    }
    report(5, "robustness: 1000 mutations + 500 crossovers per worked example", c.ok, c.detail);
}

// --- criterion 6: fitness checks equal brute-force recounts ---
Composition random_small_comp(Rng& rng) {
    Composition comp;
    comp.initial_bpm = 120;
    const int tracks = static_cast<int>(rng.uniform_int(2, 3));
    for (int t = 0; t < tracks; ++t) {
        TrackInfo track;
        track.role_id = t;
        comp.tracks.push_back(track);
        comp.notes.emplace_back();
    }
    const int notes = static_cast<int>(rng.uniform_int(4, 64));
    for (int i = 0; i < notes; ++i) {
        Note n;
        n.onset = Rational(rng.uniform_int(0, 24), 2);
        n.duration = Rational(rng.uniform_int(1, 6), 2);
        n.pitch = static_cast<int>(rng.uniform_int(36, 96));
        n.dynamic = static_cast<int>(rng.uniform_int(1, 8));
        n.velocity = 20 + 10 * n.dynamic;
        comp.notes[static_cast<std::size_t>(rng.uniform_int(0, tracks - 1))].push_back(n);
    }
    comp.sort_notes();
    return comp;
}

void criterion_6() {
    Check c;
    try {
        Rng rng(2025);
        for (int trial = 0; trial < 200 && c.ok; ++trial) {
            const auto comp = random_small_comp(rng);
            const double total = comp.total_beats().to_double();
            const double window = 4.0;

            // Dissonance: brute-force pairwise recount.
            const auto dissonance = fitness::check_harmony_atonal(
                comp, window, fitness::kDefaultDissonanceWeights, 0, 1e18);
            int index = 0;
            for (double t = 0.0; t == 0.0 || t < total; t += window / 2, ++index) {
                double expected = 0;
                for (std::size_t ta = 0; ta < comp.track_count(); ++ta)
                    for (std::size_t tb = ta + 1; tb < comp.track_count(); ++tb)
                        for (const Note& a : comp.notes[ta]) {
                            if (a.is_rest) continue;
                            const double a0 = a.onset.to_double(), a1 = a.end().to_double();
                            if (a1 <= t || a0 >= t + window) continue;
                            for (const Note& b : comp.notes[tb]) {
                                if (b.is_rest) continue;
                                const double b0 = b.onset.to_double(), b1 = b.end().to_double();
                                if (b1 <= t || b0 >= t + window) continue;
                                if (a0 < b1 && b0 < a1) {
                                    const int ic = std::abs(a.pitch - b.pitch) % 12;
                                    expected +=
                                        fitness::kDefaultDissonanceWeights[static_cast<std::size_t>(ic)];
                                }
                            }
                        }
                c.expect(index < static_cast<int>(dissonance.size()),
                         "window count mismatch (dissonance)");
                if (!c.ok) break;
                c.expect(dissonance[static_cast<std::size_t>(index)].measured == expected,
                         "dissonance recount differs");
                if (total <= window) break;
            }

            // Rhythm activity recount.
            const auto rhythm = fitness::check_rhythm_atonal(comp, window, 0, 1e18);
            index = 0;
            for (double t = 0.0; t == 0.0 || t < total; t += window / 2, ++index) {
                int expected = 0;
                for (const auto& track : comp.notes)
                    for (const Note& n : track) {
                        const double on = n.onset.to_double();
                        if (!n.is_rest && on >= t && on < t + window) ++expected;
                    }
                c.expect(rhythm[static_cast<std::size_t>(index)].measured == expected,
                         "rhythm recount differs");
                if (!c.ok || total <= window) break;
            }

            // Texture density recount at the curve samples.
            const std::vector<double> curve(8, 1.0);
            const auto texture = fitness::check_texture(comp, curve, 1e18);
            for (std::size_t i = 0; i < curve.size() && c.ok; ++i) {
                const Rational at = comp.total_beats() *
                                    Rational(static_cast<std::int64_t>(2 * i + 1), 16);
                int expected = 0;
                for (std::size_t t = 0; t < comp.track_count(); ++t) {
                    bool sounds = false;
                    for (const Note& n : comp.notes[t])
                        if (!n.is_rest && n.onset <= at && at < n.end()) sounds = true;
                    if (sounds) ++expected;
                }
                c.expect(texture[i].measured == expected, "texture recount differs");
            }

            // Role rules: never-together against a brute-force overlap scan.
            style::RoleRule never{style::RoleRule::Kind::NeverTogether, 0, 1};
            const auto verdicts = fitness::check_roles(comp, {never});
            bool expected_pass = true;
            for (const Note& a : comp.notes[0]) {
                if (a.is_rest) continue;
                for (const Note& b : comp.notes[1]) {
                    if (b.is_rest) continue;
                    // Same instant sampling as the checker: onsets and midpoints.
                    for (const Rational& at : {a.onset, (a.onset + a.end()) / Rational(2)})
                        if (b.onset <= at && at < b.end()) expected_pass = false;
                }
            }
            c.expect(verdicts[0].pass == expected_pass, "role-rule verdict differs");
        }
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(6, "fitness oracle equivalence on 200 random compositions", c.ok, c.detail);
}

// --- criterion 7: hypersong invariants ---
void criterion_7() {
    Check c;
    try {
        style::HypersongStylePlan plan;
        plan.free_parameters = {"tempo", "roles"};
        plan.versions.resize(3);
        plan.versions[0].tempo = 72;
        plan.versions[0].roles = std::vector<int>{style::kMelody, style::kPads, style::kBass};
        plan.versions[1].tempo = 66;
        plan.versions[1].roles = std::vector<int>{style::kMelody, style::kPads, style::kBass};
        plan.versions[2].tempo = 60;
        plan.versions[2].roles = std::vector<int>{style::kMelody, style::kPads};
        const auto song = hypersong::generate_hypersong(relax(), plan, 2026);

        c.expect(song.versions.size() == 3, "expected 3 versions");
        for (const auto& row : song.fragments)
            c.expect(row.size() == song.fragments[0].size(), "fragment matrix not rectangular");

        // Boundaries align with structural units.
        for (std::size_t v = 0; v < song.versions.size() && c.ok; ++v) {
            const auto periods = song.versions[v].units_of_level(1);
            c.expect(periods.size() == song.fragments[v].size(),
                     "fragment count differs from period count");
            Rational offset(0);
            for (std::size_t f = 0; f < song.fragments[v].size() && c.ok; ++f) {
                bool aligned = false;
                for (const auto& unit : periods)
                    if (unit.start == offset) aligned = true;
                c.expect(aligned || f == 0, "fragment boundary off a structural unit");
                offset += song.fragments[v][f].nominal_beats;
            }
        }

        // Tail silence present, and concatenation reproduces the versions.
        for (std::size_t v = 0; v < song.versions.size() && c.ok; ++v) {
            Rational offset(0);
            std::vector<std::vector<Note>> rebuilt(song.versions[v].notes.size());
            for (const auto& frag : song.fragments[v]) {
                c.expect(frag.tail_seconds > 0, "missing tail silence");
                Rational last(0);
                for (const auto& track : frag.content.notes)
                    for (const Note& n : track)
                        if (n.end() > last) last = n.end();
                c.expect(last <= frag.nominal_beats, "events spill into the tail");
                for (std::size_t t = 0; t < frag.content.notes.size(); ++t)
                    for (Note n : frag.content.notes[t]) {
                        n.onset += offset;
                        rebuilt[t].push_back(n);
                    }
                offset += frag.nominal_beats;
            }
            for (std::size_t t = 0; t < rebuilt.size() && c.ok; ++t) {
                std::stable_sort(rebuilt[t].begin(), rebuilt[t].end(),
                                 [](const Note& a, const Note& b) { return a.onset < b.onset; });
                c.expect(rebuilt[t].size() == song.versions[v].notes[t].size(),
                         "concatenation changes the note count");
                for (std::size_t i = 0; c.ok && i < rebuilt[t].size(); ++i) {
                    const Note& x = rebuilt[t][i];
                    const Note& y = song.versions[v].notes[t][i];
                    c.expect(x.onset == y.onset && x.duration == y.duration && x.pitch == y.pitch,
                             "concatenation differs from the original matrix");
                }
            }
        }
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(7, "hypersong invariants: rectangular, aligned, tailed, exact", c.ok, c.detail);
}

// --- criterion 8: similarity sanity ---
void criterion_8() {
    Check c;
    try {
        Rng rng(2027);
        for (int trial = 0; trial < 100 && c.ok; ++trial) {
            analysis::FeatureVector x, cen;
            for (std::size_t f = 0; f < analysis::FeatureVector::size(); ++f) {
                x.values.push_back(rng.uniform_real(-10, 10));
                cen.values.push_back(rng.uniform_real(-10, 10));
            }
            c.expect(analysis::distance_binary(x, x, cen) == 0, "self-distance must be 0");
        }

        const auto report_table =
            analysis::mutation_distance_report(load_ga(), {1, 10}, 32, 2028);
        const auto& one = report_table.rows[0];
        const auto& ten = report_table.rows[1];
        c.expect(one.distances.size() >= 30 && ten.distances.size() >= 30,
                 "fewer than 30 samples per arm");
        c.expect(ten.median >= one.median, "median at 10 mutations below median at 1");

        // One-sided sign test on paired samples: p < 0.05.
        int wins = 0, losses = 0;
        const std::size_t pairs = std::min(one.distances.size(), ten.distances.size());
        for (std::size_t i = 0; i < pairs; ++i) {
            if (ten.distances[i] > one.distances[i]) ++wins;
            else if (ten.distances[i] < one.distances[i]) ++losses;
        }
        const int n = wins + losses;
        double p_value = 0.0;
        for (int k = wins; k <= n; ++k) {
            double log_c = 0;
            for (int j = 0; j < k; ++j) log_c += std::log((n - j) / static_cast<double>(j + 1));
            p_value += std::exp(log_c - n * std::log(2.0));
        }
        c.expect(n > 0 && p_value < 0.05,
                 "sign test p=" + std::to_string(p_value) + " over " + std::to_string(n) +
                     " informative pairs (wins=" + std::to_string(wins) + ")");
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(8, "similarity sanity: self-distance 0, mutation trend (sign test)", c.ok, c.detail);
}

// --- criterion 9: MIDI round-trip over generated compositions ---
void criterion_9() {
    Check c;
    try {
        const auto style = ballad();
        for (std::uint64_t seed = 0; seed < 100 && c.ok; ++seed) {
            const auto genome = style::build_random_genome(style, seed);
            const auto comp = develop_tonal(genome, style);
            const auto parsed = notation::parse_midi(notation::to_midi(comp));
            c.expect(parsed.tracks.size() == comp.tracks.size() + 1, "track count differs");
            if (!c.ok) break;
            for (std::size_t t = 0; t < comp.tracks.size() && c.ok; ++t) {
                struct Entry {
                    long on, off;
                    int key, vel;
                };
                std::vector<Entry> expected, actual;
                for (const Note& n : comp.notes[t]) {
                    if (n.is_rest) continue;
                    long off = notation::beat_to_tick(n.end());
                    const long on = notation::beat_to_tick(n.onset);
                    if (off <= on) off = on + 1;
                    expected.push_back({on, off, n.pitch, std::clamp(n.velocity, 1, 127)});
                }
                for (const auto& n : parsed.tracks[t + 1].notes)
                    actual.push_back({n.on_tick, n.off_tick, n.key, n.velocity});
                const auto order = [](const Entry& a, const Entry& b) {
                    return std::tie(a.on, a.key, a.off, a.vel) < std::tie(b.on, b.key, b.off, b.vel);
                };
                std::sort(expected.begin(), expected.end(), order);
                std::sort(actual.begin(), actual.end(), order);
                c.expect(expected.size() == actual.size(), "note count differs");
                for (std::size_t i = 0; c.ok && i < expected.size(); ++i) {
                    c.expect(std::abs(expected[i].on - actual[i].on) <= 1, "onset off by >1 tick");
                    c.expect(std::abs(expected[i].off - actual[i].off) <= 1,
                             "duration off by >1 tick");
                    c.expect(expected[i].key == actual[i].key, "pitch differs");
                    c.expect(expected[i].vel == actual[i].vel, "velocity differs");
                }
            }
        }
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(9, "MIDI round-trip over 100 generated compositions", c.ok, c.detail);
}

// --- criterion 10: genome compactness against MIDI size ---
void criterion_10() {
    Check c;
    try {
        const auto style = ballad();
        std::vector<double> ratios;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto genome = style::build_random_genome(style, seed);
            const auto comp = develop_tonal(genome, style);
            const double genome_bytes = static_cast<double>(tonal::serialize_evg(genome).size());
            const double midi_bytes = static_cast<double>(notation::to_midi(comp).size());
            ratios.push_back(genome_bytes / midi_bytes);
        }
        std::sort(ratios.begin(), ratios.end());
        const double median = ratios[ratios.size() / 2];
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "median ratio %.3f", median);
        c.expect(median <= 1.0, buffer);
        if (c.ok) c.detail = buffer;
    } catch (const std::exception& e) {
        c.expect(false, e.what());
    }
    report(10, "compactness: median genome/MIDI byte ratio <= 1.0", c.ok, c.detail);
}

}  // namespace

int main(int argc, char** argv) {
    g_assets = argc > 1 ? argv[1] : "assets";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
