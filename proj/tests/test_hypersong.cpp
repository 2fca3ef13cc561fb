#include "doctest.h"

#include "gram/core/errors.h"
#include "gram/hypersong/hypersong.h"
#include "gram/interpret/interpret.h"
#include "gram/style/builder.h"
#include "gram/tonal/develop.h"

using namespace gram;

namespace {

style::StyleSpec relax_style() {
    return style::load_style_file(std::string(GRAM_ASSETS_DIR) + "/styles/relax.json");
}

style::HypersongStylePlan three_level_plan() {
    style::HypersongStylePlan plan;
    plan.free_parameters = {"tempo", "roles"};
    plan.versions.resize(3);
    plan.versions[0].tempo = 72;
    plan.versions[0].roles = std::vector<int>{style::kMelody, style::kPads, style::kBass};
    plan.versions[1].tempo = 66;
    plan.versions[1].roles = std::vector<int>{style::kMelody, style::kPads, style::kBass};
    plan.versions[2].tempo = 60;
    plan.versions[2].roles = std::vector<int>{style::kMelody, style::kPads};
    return plan;
}

Composition tonal_composition(std::uint64_t seed) {
    const auto style = relax_style();
    const auto genome = style::build_random_genome(style, seed);
    const auto seq = tonal::develop(genome);
    interpret::Options lenient{interpret::Mode::Lenient};
    return interpret::interpret_tonal(seq, genome, style.harmony_tables(), lenient).composition;
}

}  // namespace

TEST_CASE("fragmenting cuts at period boundaries") {
    const auto comp = tonal_composition(4);
    const auto periods = comp.units_of_level(1);
    REQUIRE(!periods.empty());
    const auto fragments = hypersong::fragment(comp, 1.5);
    CHECK(fragments.size() == periods.size());
    for (const auto& frag : fragments) CHECK(frag.tail_seconds == 1.5);
}

TEST_CASE("fragmenting an unannotated composition raises NoStructure") {
    Composition comp;
    comp.tracks.emplace_back();
    comp.notes.emplace_back();
    CHECK_THROWS_AS(hypersong::fragment(comp, 1.0), NoStructure);
}

TEST_CASE("a generated hypersong is rectangular and congruent") {
    const auto song = hypersong::generate_hypersong(relax_style(), three_level_plan(), 42);
    REQUIRE(song.versions.size() == 3);
    REQUIRE(song.fragments.size() == 3);
    for (const auto& row : song.fragments)
        CHECK(row.size() == song.fragments[0].size());
    // Decreasing instrument counts across the levels (3, 3, 2 roles).
    CHECK(song.versions[0].tracks.size() >= song.versions[2].tracks.size());
    // All versions share their structural-unit counts.
    for (const auto& version : song.versions) {
        CHECK(version.units_of_level(1).size() ==
              song.versions[0].units_of_level(1).size());
        CHECK(version.units_of_level(2).size() ==
              song.versions[0].units_of_level(2).size());
    }
}

TEST_CASE("same fragment counts, different durations across tempi") {
    const auto song = hypersong::generate_hypersong(relax_style(), three_level_plan(), 43);
    REQUIRE(song.fragments.size() == 3);
    const auto& fast = song.fragments[0];
    const auto& slow = song.fragments[2];
    REQUIRE(fast.size() == slow.size());
    // 72 vs 60 BPM: the same beats take longer in the slow version.
    for (std::size_t f = 0; f < fast.size(); ++f)
        if (fast[f].nominal_beats == slow[f].nominal_beats &&
            fast[f].nominal_beats > Rational(0))
            CHECK(slow[f].nominal_seconds > fast[f].nominal_seconds);
}

TEST_CASE("concatenating fragments reproduces the version's note matrix") {
    const auto song = hypersong::generate_hypersong(relax_style(), three_level_plan(), 44);
    for (std::size_t v = 0; v < song.versions.size(); ++v) {
        const auto& original = song.versions[v];
        Composition rebuilt;
        rebuilt.tracks = original.tracks;
        rebuilt.notes.resize(original.notes.size());
        Rational offset(0);
        for (const auto& frag : song.fragments[v]) {
            for (std::size_t t = 0; t < frag.content.notes.size(); ++t)
                for (Note n : frag.content.notes[t]) {
                    n.onset += offset;
                    rebuilt.notes[t].push_back(n);
                }
            offset += frag.nominal_beats;
        }
        rebuilt.sort_notes();
        REQUIRE(rebuilt.notes.size() == original.notes.size());
        for (std::size_t t = 0; t < original.notes.size(); ++t) {
            REQUIRE(rebuilt.notes[t].size() == original.notes[t].size());
            for (std::size_t i = 0; i < original.notes[t].size(); ++i) {
                CHECK(rebuilt.notes[t][i].onset == original.notes[t][i].onset);
                CHECK(rebuilt.notes[t][i].duration == original.notes[t][i].duration);
                CHECK(rebuilt.notes[t][i].pitch == original.notes[t][i].pitch);
            }
        }
    }
}

TEST_CASE("every fragment's last event clears the tail window") {
    const auto song = hypersong::generate_hypersong(relax_style(), three_level_plan(), 45);
    for (std::size_t v = 0; v < song.fragments.size(); ++v)
        for (const auto& frag : song.fragments[v]) {
            Rational last(0);
            for (const auto& track : frag.content.notes)
                for (const Note& n : track)
                    if (n.end() > last) last = n.end();
            // Events end by the nominal length; the tail is pure silence.
            CHECK(last <= frag.nominal_beats);
        }
}

TEST_CASE("a single-version plan degenerates to a fragmented song") {
    style::HypersongStylePlan plan;
    plan.free_parameters = {"tempo"};
    plan.versions.resize(1);
    plan.versions[0].tempo = 66;
    const auto song = hypersong::generate_hypersong(relax_style(), plan, 46);
    CHECK(song.versions.size() == 1);
    CHECK(song.manifest.version_count == 1);
    CHECK(song.manifest.fragment_count == static_cast<int>(song.fragments[0].size()));
}
