#include "doctest.h"

#include <algorithm>

#include "gram/analysis/distance.h"
#include "gram/analysis/features.h"
#include "gram/core/rng.h"
#include "gram/notation/midi.h"

using namespace gram;
using analysis::FeatureVector;

namespace {

Composition one_note(int pitch) {
    Composition comp;
    comp.initial_bpm = 60;
    comp.tracks.emplace_back();
    comp.notes.emplace_back();
    Note n;
    n.onset = Rational(0);
    n.duration = Rational(1);
    n.pitch = pitch;
    n.velocity = 64;
    comp.notes[0].push_back(n);
    return comp;
}

std::size_t feature_index(const std::string& name) {
    const auto& names = FeatureVector::names();
    return static_cast<std::size_t>(
        std::find(names.begin(), names.end(), name) - names.begin());
}

FeatureVector vec_of(std::vector<double> values) {
    FeatureVector v;
    v.values.assign(FeatureVector::size(), 0.0);
    for (std::size_t i = 0; i < values.size() && i < v.values.size(); ++i)
        v.values[i] = values[i];
    return v;
}

}  // namespace

TEST_CASE("a single middle C puts all pitch-class mass on class 0") {
    const auto features = analysis::extract_features(one_note(60));
    CHECK(features[feature_index("pitch_class_0")] == doctest::Approx(1.0));
    for (int pc = 1; pc < 12; ++pc)
        CHECK(features[feature_index("pitch_class_" + std::to_string(pc))] == doctest::Approx(0.0));
}

TEST_CASE("a C-G dyad lands on adjacent fifths bins") {
    auto comp = one_note(60);
    Note g;
    g.onset = Rational(0);
    g.duration = Rational(1);
    g.pitch = 67;
    g.velocity = 64;
    comp.notes[0].push_back(g);
    const auto features = analysis::extract_features(comp);
    // Circle-of-fifths mapping: pc -> (pc * 7) mod 12; C -> 0, G -> 1.
    CHECK(features[feature_index("fifths_0")] == doctest::Approx(0.5));
    CHECK(features[feature_index("fifths_1")] == doctest::Approx(0.5));
}

TEST_CASE("internal and MIDI extraction agree on exported compositions") {
    auto comp = one_note(60);
    Note extra;
    extra.onset = Rational(1);
    extra.duration = Rational(1, 2);
    extra.pitch = 67;
    extra.velocity = 90;
    comp.notes[0].push_back(extra);
    const auto direct = analysis::extract_features(comp);
    const auto via_midi = analysis::extract_features_midi(notation::to_midi(comp));
    REQUIRE(direct.values.size() == via_midi.values.size());
    for (std::size_t i = 0; i < direct.values.size(); ++i)
        CHECK(direct[i] == doctest::Approx(via_midi[i]).epsilon(1e-9));
}

TEST_CASE("centroid is the per-feature mean") {
    const auto a = vec_of({1, 2, 3});
    const auto b = vec_of({3, 2, 1});
    CHECK(analysis::centroid({a}) == a);
    const auto mid = analysis::centroid({a, b});
    CHECK(mid[0] == doctest::Approx(2));
    CHECK(mid[1] == doctest::Approx(2));
    CHECK(mid[2] == doctest::Approx(2));

    Rng rng(3);
    std::vector<FeatureVector> population;
    for (int i = 0; i < 5; ++i) {
        FeatureVector v;
        for (std::size_t f = 0; f < FeatureVector::size(); ++f)
            v.values.push_back(rng.uniform_real(-5, 5));
        population.push_back(v);
    }
    const auto center = analysis::centroid(population);
    for (std::size_t f = 0; f < FeatureVector::size(); ++f) {
        double sum = 0;
        for (const auto& v : population) sum += v[f];
        CHECK(center[f] == doctest::Approx(sum / 5));
    }
}

TEST_CASE("distance_binary worked values") {
    Rng rng(5);
    FeatureVector x;
    for (std::size_t f = 0; f < FeatureVector::size(); ++f)
        x.values.push_back(rng.uniform_real(-3, 3));
    FeatureVector c;
    for (std::size_t f = 0; f < FeatureVector::size(); ++f)
        c.values.push_back(rng.uniform_real(-3, 3));
    CHECK(analysis::distance_binary(x, x, c) == 0);

    // current equals the centroid; the reference differs in k features.
    FeatureVector ref = c;
    const int k = 7;
    for (int i = 0; i < k; ++i) ref.values[static_cast<std::size_t>(i)] += 1.0;
    CHECK(analysis::distance_binary(ref, c, c) == k);
}

TEST_CASE("distance_binary equals a literal re-evaluation on random triples") {
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        FeatureVector ref, cur, cen;
        for (std::size_t f = 0; f < FeatureVector::size(); ++f) {
            ref.values.push_back(rng.uniform_real(-2, 2));
            cur.values.push_back(rng.uniform_real(-2, 2));
            cen.values.push_back(rng.uniform_real(-2, 2));
        }
        int expected = 0;
        for (std::size_t f = 0; f < FeatureVector::size(); ++f)
            if (std::abs(ref[f] - cur[f]) > std::abs(cen[f] - cur[f])) ++expected;
        CHECK(analysis::distance_binary(ref, cur, cen) == expected);
    }
}

TEST_CASE("distance_rank worked values and oracle") {
    Rng rng(7);
    FeatureVector solo;
    for (std::size_t f = 0; f < FeatureVector::size(); ++f)
        solo.values.push_back(rng.uniform_real(-2, 2));
    FeatureVector center;
    for (std::size_t f = 0; f < FeatureVector::size(); ++f)
        center.values.push_back(rng.uniform_real(-2, 2));
    // Population of one: every rank is 1.
    CHECK(analysis::distance_rank(solo, center, {solo}) ==
          static_cast<int>(FeatureVector::size()));

    // current == centroid while every other member differs on every feature.
    std::vector<FeatureVector> population{center};
    for (int i = 0; i < 4; ++i) {
        FeatureVector v = center;
        for (auto& value : v.values) value += 1.0 + i;
        population.push_back(v);
    }
    CHECK(analysis::distance_rank(center, center, population) ==
          static_cast<int>(FeatureVector::size()));

    // 5-theme synthetic population against brute-force sort-and-index.
    std::vector<FeatureVector> themes;
    for (int i = 0; i < 5; ++i) {
        FeatureVector v;
        for (std::size_t f = 0; f < FeatureVector::size(); ++f)
            v.values.push_back(rng.uniform_real(-4, 4));
        themes.push_back(v);
    }
    for (const auto& current : themes) {
        int expected = 0;
        for (std::size_t f = 0; f < FeatureVector::size(); ++f) {
            std::vector<std::pair<double, const FeatureVector*>> list;
            for (const auto& t : themes) list.emplace_back(std::abs(center[f] - t[f]), &t);
            std::stable_sort(list.begin(), list.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (std::size_t rank = 0; rank < list.size(); ++rank)
                if (list[rank].second == &current) expected += static_cast<int>(rank) + 1;
        }
        CHECK(analysis::distance_rank(current, center, themes) == expected);
    }
}

TEST_CASE("rank distance is at least the feature count") {
    Rng rng(8);
    std::vector<FeatureVector> population;
    for (int i = 0; i < 6; ++i) {
        FeatureVector v;
        for (std::size_t f = 0; f < FeatureVector::size(); ++f)
            v.values.push_back(rng.uniform_real(-3, 3));
        population.push_back(v);
    }
    const auto center = analysis::centroid(population);
    for (const auto& v : population)
        CHECK(analysis::distance_rank(v, center, population) >=
              static_cast<int>(FeatureVector::size()));
}

TEST_CASE("track-symmetric features ignore track order") {
    Composition comp;
    comp.initial_bpm = 100;
    for (int t = 0; t < 2; ++t) {
        TrackInfo track;
        track.midi_program = 10 + t;
        comp.tracks.push_back(track);
        comp.notes.emplace_back();
    }
    for (int i = 0; i < 6; ++i) {
        Note n;
        n.onset = Rational(i);
        n.duration = Rational(1);
        n.pitch = 50 + 3 * i;
        n.velocity = 70;
        comp.notes[i % 2].push_back(n);
    }
    Composition swapped = comp;
    std::swap(swapped.tracks[0], swapped.tracks[1]);
    std::swap(swapped.notes[0], swapped.notes[1]);
    const auto a = analysis::extract_features(comp);
    const auto b = analysis::extract_features(swapped);
    for (const char* name : {"pitch_class_2", "fifths_3", "note_density", "mean_pitch",
                             "instrument_count", "chord_rate"})
        CHECK(a[feature_index(name)] == doctest::Approx(b[feature_index(name)]));
}

TEST_CASE("mutation distance report: zero mutations, zero distance") {
    const auto base = atonal::parse_gen_file(std::string(GRAM_ASSETS_DIR) + "/g_a.gen");
    const auto report = analysis::mutation_distance_report(base, {0, 1}, 5, 77);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].mutations == 0);
    CHECK(report.rows[0].median == doctest::Approx(0));
    for (int d : report.rows[0].distances) CHECK(d == 0);
    CHECK(!report.table_text().empty());
    CHECK(!report.series_text().empty());
}

TEST_CASE("mutation distance report is deterministic per seed") {
    const auto base = atonal::parse_gen_file(std::string(GRAM_ASSETS_DIR) + "/g_a.gen");
    const auto a = analysis::mutation_distance_report(base, {1, 4}, 4, 5);
    const auto b = analysis::mutation_distance_report(base, {1, 4}, 4, 5);
    CHECK(a.table_text() == b.table_text());
}
