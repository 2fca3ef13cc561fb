#include "doctest.h"

#include <fstream>
#include <sstream>

#include "gram/atonal/genome.h"
#include "gram/atonal/rewrite.h"
#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/core/rng.h"
#include "gram/evolve/evolve.h"

using namespace gram;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

atonal::Genome load_ga() { return atonal::parse_gen_file(std::string(GRAM_ASSETS_DIR) + "/g_a.gen"); }

}  // namespace

TEST_CASE("parse_gen reads the worked-example genome") {
    const auto genome = load_ga();
    CHECK(genome.rules.size() == 5);
    CHECK(genome.initial_iteration == 1.0);
    CHECK(genome.base_duration == 1.0);
    CHECK(genome.duration_step == 0.5);
    for (const auto& rule : genome.rules) CHECK(rule.iterativity == 1.0);
    CHECK(genome.rules[1].instrument_id == kRestInstrument);
    CHECK(genome.rules[2].tessitura_lo == 36);
    CHECK(genome.rules[2].tessitura_hi == 96);
    // Axiom RHS carries the seven-step pitch rise.
    int ups = 0;
    for (const auto& s : genome.rules[0].rhs)
        if (s.kind == atonal::Symbol::Kind::Operator && s.value == atonal::kOpPitchUp) ++ups;
    CHECK(ups == 7);
}

TEST_CASE("parse_gen handles the axiom-only genome") {
    const auto genome = atonal::parse_gen("1 1 0.5\n1 1 0 0 60 72 #0\n");
    CHECK(genome.rules.size() == 1);
    CHECK(genome.rules[0].rhs.size() == 1);
    CHECK(genome.rules[0].rhs[0] == atonal::Symbol::structural(0));
}

TEST_CASE("parse_gen rejects malformed input") {
    CHECK_THROWS_AS(atonal::parse_gen("1 1\n1 1 0 0 0 127 #0\n"), MalformedHeader);
    CHECK_THROWS_AS(atonal::parse_gen("1 1 0.5 9\n1 1 0 0 0 127 #0\n"), MalformedHeader);
    CHECK_THROWS_AS(atonal::parse_gen("1 1 0.5\n1 1 0 0 0 127 $999\n"), UnknownSymbol);
    CHECK_THROWS_AS(atonal::parse_gen("1 1 0.5\n1 1 0 0 0 127 #4\n"), DanglingReference);
    CHECK_THROWS_AS(atonal::parse_gen(""), MalformedHeader);
}

TEST_CASE("rewrite reproduces the worked-example trace") {
    const auto genome = load_ga();
    const auto trace = atonal::rewrite_trace(genome);

    REQUIRE(trace.strings.size() == 4);
    CHECK(atonal::to_text(trace.strings[0]) == "@60$102$96#2$1$1$1$1$1$1$1#2");
    CHECK(trace.remaining[0] == std::vector<double>{0, 1, 1, 1, 1});

    CHECK(atonal::to_text(trace.strings[1]) == "@60$102$96$7#3$8#4$1$1$1$1$1$1$1$7#3$8#4");
    CHECK(trace.remaining[1] == std::vector<double>{0, 1, 0, 1, 1});

    CHECK(atonal::to_text(trace.strings[2]) ==
          "@60$102$96$7#3$2#3$1$1#1#3$8#4#1$5$1$1$1#4$6#4$1$1$1$1$1$1$1"
          "$7#3$2#3$1$1#1#3$8#4#1$5$1$1$1#4$6#4");
    CHECK(trace.remaining[2] == std::vector<double>{0, 1, 0, 0, 0});

    // The fourth iteration only rewrites the rest symbol into itself.
    CHECK(trace.strings[3] == trace.strings[2]);
    CHECK(trace.remaining[3] == std::vector<double>{0, 0, 0, 0, 0});
}

TEST_CASE("rewrite of an identity rule burns down its iterativity") {
    const auto genome = atonal::parse_gen("3 1 0.5\n1 1 0 0 0 127 #0\n");
    const auto trace = atonal::rewrite_trace(genome);
    CHECK(trace.strings.size() == 3);
    CHECK(atonal::to_text(trace.final_string) == "#0");
}

TEST_CASE("rewrite guards against non-termination") {
    // Zero iterativity on a growing rule can never stop on its own.
    const auto growing = atonal::parse_gen("1 1 0.5\n0 1 0 0 0 127 #0$1\n");
    CHECK_THROWS_AS(atonal::rewrite(growing), DevelopmentOverflow);

    // Zero iterativity on an identity rule stalls at the fixed point.
    const auto stalled = atonal::parse_gen("1 1 0.5\n0 1 0 0 0 127 #0\n");
    CHECK(atonal::to_text(atonal::rewrite(stalled)) == "#0");
}

TEST_CASE("rewrite is deterministic and monotone") {
    const auto genome = load_ga();
    CHECK(atonal::rewrite(genome) == atonal::rewrite(genome));
    const auto trace = atonal::rewrite_trace(genome);
    for (std::size_t i = 1; i < trace.remaining.size(); ++i)
        for (std::size_t k = 0; k < trace.remaining[i].size(); ++k)
            CHECK(trace.remaining[i][k] <= trace.remaining[i - 1][k]);
}

TEST_CASE("serialize_gen round-trips") {
    const auto genome = load_ga();
    CHECK(atonal::parse_gen(atonal::serialize_gen(genome)) == genome);

    // Byte comparison against the asset after whitespace normalization.
    const std::string original = read_file(std::string(GRAM_ASSETS_DIR) + "/g_a.gen");
    std::string normalized;
    for (char c : original)
        if (c != ' ' || (normalized.size() && normalized.back() != ' ')) normalized += c;
    CHECK(atonal::serialize_gen(genome) == normalized);
}

TEST_CASE("serialize_gen round-trips randomized genomes") {
    Rng rng(2024);
    evolve::MutationConfig config;
    auto genome = load_ga();
    for (int i = 0; i < 100; ++i) {
        genome = evolve::mutate_atonal(genome, rng, config);
        CHECK(atonal::parse_gen(atonal::serialize_gen(genome)) == genome);
    }
}

TEST_CASE("tessitura field order is preserved") {
    const auto genome = atonal::parse_gen("1 1 0.5\n1 1 0 0 60 72 #0\n");
    const std::string text = atonal::serialize_gen(genome);
    CHECK(text.find("60 72") != std::string::npos);
}

TEST_CASE("alphabet closure: surviving structural symbols are exhausted") {
    const auto genome = load_ga();
    const auto trace = atonal::rewrite_trace(genome);
    const auto& remaining = trace.remaining.back();
    for (const auto& s : trace.final_string) {
        if (s.kind == atonal::Symbol::Kind::Structural)
            CHECK(remaining[static_cast<std::size_t>(s.value)] <= 0.0);
        else
            CHECK((s.kind == atonal::Symbol::Kind::Operator ||
                   s.kind == atonal::Symbol::Kind::Argument));
    }
}
