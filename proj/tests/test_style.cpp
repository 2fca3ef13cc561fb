#include "doctest.h"

#include <set>

#include "gram/core/errors.h"
#include "gram/fitness/fitness.h"
#include "gram/style/builder.h"
#include "gram/style/style.h"
#include "gram/tonal/develop.h"

using namespace gram;

namespace {

style::StyleSpec ballad() {
    return style::load_style_file(std::string(GRAM_ASSETS_DIR) + "/styles/guitar_ballad.json");
}

/// Every option collapsed to a single choice.
std::string singleton_style_json() {
    return R"({
      "name": "pinned",
      "structure": [
        {"children": [2], "distinct": [1]},
        {"children": [2], "distinct": [1]},
        {"children": [2], "distinct": [1]}
      ],
      "durationSeconds": [0, 10000],
      "tempo": [100],
      "dynamics": [4],
      "roles": [
        {"role": "melody", "instruments": [{"id": 0, "p": 1.0}],
         "patterns": [{"durations": [1, 1, 1, 1], "p": 1.0}]}
      ],
      "scales": [{"mode": 0, "key": 0}],
      "chords": [{"name": "major triad", "intervals": [0, 4, 7]}],
      "validRoots": [0],
      "progressions": [[{"root": 0, "chord": 0}]],
      "rhythmicModes": [{"beats": 4, "accents": [1, 3, 2, 4]}],
      "melodicIntervals": [{"step": 1, "weight": 1.0}],
      "alterationIntensity": [0, 0, 0]
    })";
}

}  // namespace

TEST_CASE("the bundled guitar-ballad style loads cleanly") {
    const auto style = ballad();
    CHECK(style.name == "guitar ballad");
    CHECK(style.tempo_options == std::vector<double>{90});
    CHECK(style.roles.size() == 3);
    CHECK(style.rhythmic_modes[0].accents == std::vector<int>{1, 3, 2, 4});
}

TEST_CASE("style validation rejects inconsistent documents") {
    // probabilities summing to 0.9
    std::string bad = singleton_style_json();
    bad.replace(bad.find("\"p\": 1.0"), 8, "\"p\": 0.9");
    CHECK_THROWS_AS(style::load_style(bad), ConsistencyError);

    // accent vector shorter than the measure
    std::string accents = singleton_style_json();
    accents.replace(accents.find("[1, 3, 2, 4]"), 12, "[1, 3, 2]");
    CHECK_THROWS_AS(style::load_style(accents), ConsistencyError);

    // progression referencing a missing chord
    std::string chords = singleton_style_json();
    chords.replace(chords.find("\"chord\": 0"), 10, "\"chord\": 7");
    CHECK_THROWS_AS(style::load_style(chords), ConsistencyError);

    CHECK_THROWS_AS(style::load_style("{}"), SchemaError);
    CHECK_THROWS_AS(style::load_style("not json"), SchemaError);
}

TEST_CASE("a minimal style loads") {
    CHECK(style::load_style(singleton_style_json()).roles.size() == 1);
}

TEST_CASE("build_random_genome realizes the ballad structure") {
    const auto style = ballad();
    const auto genome = style::build_random_genome(style, 1);
    // 3 periods over 2 distinct types; 3 role tracks plus the rest track.
    int periods = 0;
    std::set<int> distinct;
    for (const auto& s : genome.levels[0][0].rhs)
        if (s.kind == tonal::Symbol::Kind::NonTerminal) {
            ++periods;
            distinct.insert(s.ref);
        }
    CHECK(periods == 3);
    CHECK(distinct.size() == 2);
    CHECK(genome.tracks.size() == 4);
    CHECK(genome.globals.initial_tempo == 90.0);
}

TEST_CASE("a fully pinned style builds the same genome for every seed") {
    const auto style = style::load_style(singleton_style_json());
    const auto reference = style::build_random_genome(style, 1);
    for (std::uint64_t seed = 2; seed <= 6; ++seed)
        CHECK(style::build_random_genome(style, seed) == reference);
}

TEST_CASE("different seeds differ but both stay genome-level valid") {
    const auto style = ballad();
    const auto a = style::build_random_genome(style, 1);
    const auto b = style::build_random_genome(style, 2);
    CHECK(!(a == b));
    for (const auto* genome : {&a, &b})
        for (const auto& v : fitness::check_structure(*genome, style)) CHECK(v.pass);
}

TEST_CASE("genome legality holds across 1000 seeds") {
    const auto style = ballad();
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto genome = style::build_random_genome(style, seed);
        genome.validate();
        for (const auto& v : fitness::check_structure(genome, style)) {
            if (!v.pass) CAPTURE(seed);
            REQUIRE(v.pass);
        }
    }
}

TEST_CASE("hypersong instantiation pins shared parameters once") {
    const auto style = style::load_style_file(std::string(GRAM_ASSETS_DIR) + "/styles/relax.json");
    style::HypersongStylePlan plan;
    plan.free_parameters = {"tempo", "roles"};
    plan.versions.resize(3);
    plan.versions[0].tempo = 72;
    plan.versions[0].roles = std::vector<int>{style::kMelody, style::kPads, style::kBass};
    plan.versions[1].tempo = 66;
    plan.versions[1].roles = std::vector<int>{style::kMelody, style::kPads, style::kBass};
    plan.versions[2].tempo = 60;
    plan.versions[2].roles = std::vector<int>{style::kMelody, style::kPads};

    const auto styles = style::instantiate_hypersong_styles(style, plan, 5);
    REQUIRE(styles.size() == 3);
    // Shared phase-1 pinning: identical structure and scales everywhere.
    for (const auto& s : styles) {
        CHECK(s.structure[0].children == styles[0].structure[0].children);
        CHECK(s.scales.size() == 1);
        CHECK(s.scales[0].mode_id == styles[0].scales[0].mode_id);
    }
    // Version fields differ as requested (field-diff oracle).
    CHECK(styles[0].tempo_options == std::vector<double>{72});
    CHECK(styles[2].tempo_options == std::vector<double>{60});
    CHECK(styles[0].roles.size() == 3);
    CHECK(styles[2].roles.size() == 2);

    // Structural congruence of the built genomes.
    const auto g0 = style::build_random_genome(styles[0], 9);
    const auto g2 = style::build_random_genome(styles[2], 9);
    CHECK(g0.levels[0][0].rhs.size() == g2.levels[0][0].rhs.size());
    CHECK(g0.levels[1].size() == g2.levels[1].size());
}

TEST_CASE("hypersong instantiation rejects mismatched version parameters") {
    const auto style = ballad();
    style::HypersongStylePlan plan;
    plan.free_parameters = {"tempo"};
    plan.versions.resize(1);  // tempo missing
    CHECK_THROWS_AS(style::instantiate_hypersong_styles(style, plan, 1), ParameterMismatch);

    plan.versions[0].tempo = 90;
    plan.versions[0].dynamic = 4;  // dynamic is not free
    CHECK_THROWS_AS(style::instantiate_hypersong_styles(style, plan, 1), ParameterMismatch);

    style::HypersongStylePlan empty_plan;
    CHECK(style::instantiate_hypersong_styles(style, empty_plan, 1).empty());
}
