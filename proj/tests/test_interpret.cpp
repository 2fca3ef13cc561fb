#include "doctest.h"

#include <set>

#include "gram/atonal/rewrite.h"
#include "gram/core/errors.h"
#include "gram/core/rng.h"
#include "gram/core/scale.h"
#include "gram/interpret/clean.h"
#include "gram/interpret/interpret.h"
#include "gram/tonal/develop.h"

using namespace gram;

namespace {

atonal::Genome load_ga() { return atonal::parse_gen_file(std::string(GRAM_ASSETS_DIR) + "/g_a.gen"); }
tonal::Genome load_gt() { return tonal::parse_evg_file(std::string(GRAM_ASSETS_DIR) + "/g_t.evg"); }

std::vector<Note> sounding(const Composition& comp, std::size_t track) {
    std::vector<Note> out;
    for (const Note& n : comp.notes[track])
        if (!n.is_rest) out.push_back(n);
    return out;
}

bool same_matrix(const Composition& a, const Composition& b) {
    if (a.notes.size() != b.notes.size()) return false;
    for (std::size_t t = 0; t < a.notes.size(); ++t) {
        if (a.notes[t].size() != b.notes[t].size()) return false;
        for (std::size_t i = 0; i < a.notes[t].size(); ++i) {
            const Note& x = a.notes[t][i];
            const Note& y = b.notes[t][i];
            if (x.onset != y.onset || x.duration != y.duration || x.pitch != y.pitch ||
                x.is_rest != y.is_rest || x.velocity != y.velocity)
                return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("iteration-1 interpretation: two organ notes an octave apart") {
    const auto genome = load_ga();
    atonal::RewriteOptions options;
    options.stop_after = 1;
    const auto seq = atonal::rewrite(genome, options);
    const auto result = interpret::interpret_atonal(seq, genome);
    const auto& comp = result.composition;

    const auto organ = sounding(comp, 2);
    REQUIRE(organ.size() == 2);
    CHECK(organ[0].pitch == 60);   // middle C
    CHECK(organ[1].pitch == 72);   // seven C-major steps up = one octave
    CHECK(organ[0].onset == Rational(0));
    CHECK(organ[1].onset == Rational(1));
    CHECK(organ[0].dynamic == 5);  // mezzo-forte
    REQUIRE(comp.tempo.size() == 1);
    CHECK(comp.tempo[0].bpm == 60.0);
}

TEST_CASE("pitch stack push/pop restores the state") {
    const auto genome = load_ga();
    const auto seq = atonal::rhs_from_text("$5$1$6#2");
    const auto result = interpret::interpret_atonal(seq, genome);
    const auto organ = sounding(result.composition, 2);
    REQUIRE(organ.size() == 1);
    CHECK(organ[0].pitch == 60);
}

TEST_CASE("iteration-2 interpretation: organ and cello in unison") {
    const auto genome = load_ga();
    atonal::RewriteOptions options;
    options.stop_after = 2;
    const auto seq = atonal::rewrite(genome, options);
    const auto result = interpret::interpret_atonal(seq, genome);
    const auto& comp = result.composition;

    const auto tracks = comp.sounding_tracks();
    REQUIRE(tracks == std::vector<std::size_t>{3, 4});
    const auto organ = sounding(comp, 3);
    const auto cello = sounding(comp, 4);
    REQUIRE(organ.size() == 2);
    REQUIRE(cello.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(organ[i].onset == cello[i].onset);
        CHECK(organ[i].pitch == cello[i].pitch);
        CHECK(organ[i].duration == cello[i].duration);
    }
    CHECK(organ[1].pitch == organ[0].pitch + 12);
}

TEST_CASE("stack underflow and missing arguments") {
    const auto genome = load_ga();
    CHECK_THROWS_AS(interpret::interpret_atonal(atonal::rhs_from_text("$8#2"), genome),
                    UnderflowError);
    CHECK_THROWS_AS(interpret::interpret_atonal(atonal::rhs_from_text("$6#2"), genome),
                    UnderflowError);
    CHECK_THROWS_AS(interpret::interpret_atonal(atonal::rhs_from_text("$102#2"), genome),
                    MissingArgument);

    interpret::Options lenient{interpret::Mode::Lenient};
    const auto result =
        interpret::interpret_atonal(atonal::rhs_from_text("$8$6$102#2"), genome, {}, lenient);
    CHECK(result.warnings.size() == 3);
    CHECK(sounding(result.composition, 2).size() == 1);
}

TEST_CASE("clean_string removes dominated dynamics and inverse pairs") {
    const auto genome = load_ga();
    const auto interpret_text = [&](const std::string& text) {
        return interpret::interpret_atonal(atonal::rhs_from_text(text), genome).composition;
    };

    const auto cleaned = interpret::clean_string(atonal::rhs_from_text("$96$97#2"));
    CHECK(atonal::to_text(cleaned) == "$97#2");
    CHECK(same_matrix(interpret_text("$96$97#2"), interpret_text("$97#2")));

    CHECK(atonal::to_text(interpret::clean_string(atonal::rhs_from_text("$5$6#2"))) == "#2");
    CHECK(atonal::to_text(interpret::clean_string(atonal::rhs_from_text("$5$5$6$6#2"))) == "#2");

    const auto untouched = atonal::rhs_from_text("$96#2$97#2");
    CHECK(interpret::clean_string(untouched) == untouched);
}

TEST_CASE("clean_string is idempotent and semantics-preserving on random strings") {
    const auto genome = load_ga();
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        atonal::SymbolString seq;
        const int pushes = static_cast<int>(rng.uniform_int(0, 3));
        for (int i = 0; i < pushes; ++i) seq.push_back(atonal::Symbol::op(5));
        for (int i = 0; i < 12; ++i) {
            switch (rng.uniform_int(0, 4)) {
                case 0: seq.push_back(atonal::Symbol::op(static_cast<int>(rng.uniform_int(92, 99)))); break;
                case 1: seq.push_back(atonal::Symbol::op(1)); break;
                case 2: seq.push_back(atonal::Symbol::op(2)); break;
                case 3: seq.push_back(atonal::Symbol::structural(2)); break;
                default: seq.push_back(atonal::Symbol::op(3)); break;
            }
        }
        for (int i = 0; i < pushes; ++i) seq.push_back(atonal::Symbol::op(6));
        const auto cleaned = interpret::clean_string(seq);
        CHECK(interpret::clean_string(cleaned) == cleaned);
        CHECK(same_matrix(interpret::interpret_atonal(seq, genome).composition,
                          interpret::interpret_atonal(cleaned, genome).composition));
    }
}

TEST_CASE("time-stack displacement balances out") {
    const auto genome = load_ga();
    const auto seq = atonal::rewrite(genome);
    const auto result = interpret::interpret_atonal(seq, genome);
    // Matched push/pop pairs mean the final onset equals the sum of
    // durations emitted outside any pushed region on the main line.
    const auto& comp = result.composition;
    Rational last(0);
    for (const auto& track : comp.notes)
        for (const Note& n : track)
            if (n.end() > last) last = n.end();
    CHECK(last > Rational(0));
}

TEST_CASE("tonal interpretation matches the worked example's shape") {
    const auto genome = load_gt();
    const auto seq = tonal::develop(genome);
    const auto result = interpret::interpret_tonal(seq, genome);
    const auto& comp = result.composition;

    // Violin carries the melody, the double bass sounds chord roots.
    const auto violin = sounding(comp, 0);
    const auto bass = sounding(comp, 2);
    CHECK(violin.size() > 0);
    CHECK(bass.size() > 0);
    // Every bass note carries the pitch class of the harmonic root active
    // when its chord operator resolved (the N between ideas moves it).
    REQUIRE(comp.harmony.size() == bass.size());
    const auto& major = scale_by_id(0);
    for (std::size_t i = 0; i < bass.size(); ++i) {
        const int expected_pc = degree_pitch_class(major, 0, comp.harmony[i].root);
        CHECK(bass[i].pitch % 12 == expected_pc);
    }

    // Each idea E holds three violin notes; rule E sounds three bass roots.
    // Periods: two identical A periods seven steps apart, then B.
    const auto periods = comp.units_of_level(1);
    REQUIRE(periods.size() == 3);
    CHECK(periods[0].type_id == periods[1].type_id);
    CHECK(periods[2].type_id != periods[0].type_id);

    // Pitches of the second A period sit one octave above the first.
    const auto in_span = [&](const StructureUnit& u) {
        std::vector<int> out;
        for (const Note& n : violin)
            if (n.onset >= u.start && n.onset < u.end) out.push_back(n.pitch);
        return out;
    };
    const auto first = in_span(periods[0]);
    const auto second = in_span(periods[1]);
    REQUIRE(first.size() == second.size());
    REQUIRE(!first.empty());
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(second[i] == first[i] + 12);

    // Harmony annotations recorded at every M resolution.
    CHECK(comp.harmony.size() == bass.size());
}

TEST_CASE("a single idea of the worked example interprets as printed") {
    const auto genome = load_gt();
    // Rule E: <anaNNsa>M0.0.0.0b M0.0.0.0b s M0.0.0.0b
    tonal::SymbolString seq = genome.levels[3][0].rhs;
    const auto result = interpret::interpret_tonal(seq, genome);
    const auto& comp = result.composition;

    const auto violin = sounding(comp, 0);
    REQUIRE(violin.size() == 3);
    // a n a N N s a: middle C, down one step (B3), then up two steps (C5? no:
    // degrees 0, -1, +1) -> 60, 59, 62.
    CHECK(violin[0].pitch == 60);
    CHECK(violin[1].pitch == 59);
    CHECK(violin[2].pitch == 62);

    // The rest between the violin notes lands on the rest track.
    REQUIRE(comp.notes[1].size() >= 1);
    CHECK(comp.notes[1].front().is_rest);

    // Bass roots sound at the popped time position: first one at beat 0.
    const auto bass = sounding(comp, 2);
    REQUIRE(bass.size() == 3);
    CHECK(bass[0].onset == Rational(0));
}

TEST_CASE("suppressor prevents a role's notes") {
    const auto genome = tonal::parse_evg(
        "3 80 0 0 1 0.5 0;40 60 55 103 40 100 0 3;43 36 28 67 40 100 4 4|A X4 B|ab;ab");
    // Level 0 introduces A and B; B is suppressed for role 4 (the bass).
    const auto seq = tonal::develop(genome);
    const auto result = interpret::interpret_tonal(seq, genome);
    const auto bass = sounding(result.composition, 1);
    // The bass sounds in A but not in B.
    CHECK(bass.size() == 1);
}

TEST_CASE("anacrusis deletes leading material") {
    const auto genome = tonal::parse_evg(
        "3 80 0 0 1 0.5 0;40 60 55 103 40 100 0 3|aaaaY4.1a");
    const auto seq = tonal::develop(genome);
    const auto result = interpret::interpret_tonal(seq, genome);
    // Four quarter notes emitted; Y4.1 keeps only the last beat of the
    // four, then a fifth note follows.
    const auto notes = sounding(result.composition, 0);
    REQUIRE(notes.size() == 2);
    CHECK(notes[0].onset == Rational(3));
    CHECK(notes[1].onset == Rational(4));
}

TEST_CASE("dynamic operator: absolute and progressive") {
    const auto genome = tonal::parse_evg(
        "3 80 0 0 1 0.5 0;40 60 55 103 40 100 0 3|W6.0aW0.6aaaa");
    const auto seq = tonal::develop(genome);
    const auto result = interpret::interpret_tonal(seq, genome);
    const auto notes = sounding(result.composition, 0);
    REQUIRE(notes.size() == 5);
    CHECK(notes[0].dynamic == 7);  // W6.0 -> absolute level 7 of 8
    // W0.6 ramps upward from ppp toward ff.
    CHECK(notes[1].dynamic < notes[4].dynamic);
}
