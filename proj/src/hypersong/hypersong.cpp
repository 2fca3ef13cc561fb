#include "gram/hypersong/hypersong.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "gram/core/errors.h"
#include "gram/interpret/clean.h"
#include "gram/interpret/interpret.h"
#include "gram/interpret/stabilize.h"
#include "gram/notation/midi.h"
#include "gram/tonal/develop.h"

namespace gram::hypersong {

std::vector<Fragment> fragment(const Composition& comp, double tail_seconds) {
    const auto periods = comp.units_of_level(1);
    if (periods.empty()) throw NoStructure("composition carries no structural annotations");

    // Cut points: period starts plus the composition end.
    std::vector<Rational> cuts;
    for (const auto& unit : periods)
        if (cuts.empty() || unit.start > cuts.back()) cuts.push_back(unit.start);
    const Rational total = comp.total_beats();
    if (cuts.empty() || cuts.front() > Rational(0)) cuts.insert(cuts.begin(), Rational(0));
    cuts.push_back(total);

    std::vector<Fragment> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational lo = cuts[i];
        const Rational hi = cuts[i + 1];
        Fragment frag;
        frag.nominal_beats = hi - lo;
        frag.nominal_seconds = comp.beats_to_seconds(hi) - comp.beats_to_seconds(lo);
        frag.tail_seconds = tail_seconds;
        frag.content.meta = comp.meta;
        frag.content.tracks = comp.tracks;
        frag.content.beats_per_measure = comp.beats_per_measure;
        frag.content.notes.resize(comp.notes.size());
        for (std::size_t t = 0; t < comp.notes.size(); ++t)
            for (const Note& n : comp.notes[t]) {
                if (n.onset < lo || n.onset >= hi) continue;
                Note moved = n;
                moved.onset = n.onset - lo;
                frag.content.notes[t].push_back(moved);
            }
        // Tempo in force at the cut, then changes inside the slice.
        double bpm = comp.initial_bpm;
        for (const auto& ev : comp.tempo)
            if (ev.beat <= lo) bpm = ev.bpm;
        frag.content.initial_bpm = bpm;
        for (const auto& ev : comp.tempo)
            if (ev.beat > lo && ev.beat < hi) frag.content.tempo.push_back({ev.beat - lo, ev.bpm});
        out.push_back(std::move(frag));
    }
    return out;
}

Hypersong generate_hypersong(const style::StyleSpec& style,
                             const style::HypersongStylePlan& plan, std::uint64_t seed,
                             const GenerateOptions& options) {
    const auto styles = style::instantiate_hypersong_styles(style, plan, seed);
    Hypersong song;
    song.manifest.meta_theme_prefix = options.name_prefix;
    song.manifest.tail_seconds = options.tail_seconds;
    for (std::size_t v = 0; v < styles.size(); ++v) {
        // The same seed per version: the meta-instantiation pinned all
        // structural options, so every version is congruent.
        const auto genome = style::build_random_genome(styles[v], seed);
        const auto seq = interpret::clean_string(tonal::develop(genome));
        interpret::Options lenient{interpret::Mode::Lenient};
        auto result = interpret::interpret_tonal(seq, genome, styles[v].harmony_tables(), lenient);
        result.composition.beats_per_measure = styles[v].rhythmic_modes.empty()
                                                   ? 4
                                                   : styles[v].rhythmic_modes.front().beats_per_measure;
        Composition comp =
            interpret::stabilize(result.composition, {genome.globals.base_duration});
        comp.meta.name = options.name_prefix + "_v" + std::to_string(v);
        comp.meta.style_name = styles[v].name;
        song.versions.push_back(std::move(comp));
    }
    for (const auto& version : song.versions)
        song.fragments.push_back(fragment(version, options.tail_seconds));

    // Every version must expose the same fragment count.
    for (const auto& row : song.fragments)
        if (row.size() != song.fragments.front().size())
            throw Error("hypersong versions disagree on fragment count");

    song.manifest.version_count = static_cast<int>(song.versions.size());
    song.manifest.fragment_count =
        song.fragments.empty() ? 0 : static_cast<int>(song.fragments.front().size());
    for (const auto& row : song.fragments) {
        std::vector<double> seconds;
        for (const auto& frag : row) seconds.push_back(frag.nominal_seconds);
        song.manifest.fragment_seconds.push_back(seconds);
    }
    return song;
}

std::string manifest_json(const Hypersong& song) {
    nlohmann::ordered_json doc;
    doc["metaThemePrefix"] = song.manifest.meta_theme_prefix;
    doc["numVersions"] = song.manifest.version_count;
    doc["numFragments"] = song.manifest.fragment_count;
    doc["tailSeconds"] = song.manifest.tail_seconds;
    nlohmann::ordered_json versions = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < song.fragments.size(); ++v) {
        nlohmann::ordered_json row;
        row["version"] = v;
        nlohmann::ordered_json frags = nlohmann::ordered_json::array();
        for (std::size_t f = 0; f < song.fragments[v].size(); ++f) {
            const Fragment& frag = song.fragments[v][f];
            nlohmann::ordered_json entry;
            entry["index"] = f;
            entry["nominalSeconds"] = frag.nominal_seconds;
            entry["tailSeconds"] = frag.tail_seconds;
            entry["file"] = song.manifest.meta_theme_prefix + "_v" + std::to_string(v) + "_f" +
                            std::to_string(f) + ".mid";
            frags.push_back(entry);
        }
        row["fragments"] = frags;
        versions.push_back(row);
    }
    doc["versions"] = versions;
    return doc.dump(2) + "\n";
}

void write_bundle(const Hypersong& song, const std::string& directory) {
    std::filesystem::create_directories(directory);
    {
        std::ofstream out(directory + "/manifest.json", std::ios::binary);
        if (!out) throw Error("cannot write manifest in " + directory);
        out << manifest_json(song);
    }
    for (std::size_t v = 0; v < song.fragments.size(); ++v)
        for (std::size_t f = 0; f < song.fragments[v].size(); ++f) {
            const Fragment& frag = song.fragments[v][f];
            Composition padded = frag.content;
            // Trailing silence for note decay, represented as a rest so the
            // MIDI end-of-track lands after the tail.
            if (!padded.notes.empty()) {
                const double bpm = padded.initial_bpm > 0 ? padded.initial_bpm : 120.0;
                const double tail_beats = frag.tail_seconds * bpm / 60.0;
                Note tail;
                tail.is_rest = true;
                const Rational start =
                    frag.nominal_beats > padded.total_beats() ? frag.nominal_beats
                                                              : padded.total_beats();
                tail.onset = start;
                tail.duration = Rational(static_cast<std::int64_t>(tail_beats * 1000 + 0.5), 1000);
                padded.notes.back().push_back(tail);
            }
            const std::string path = directory + "/" + song.manifest.meta_theme_prefix + "_v" +
                                     std::to_string(v) + "_f" + std::to_string(f) + ".mid";
            notation::write_midi_file(padded, path);
        }
}

}  // namespace gram::hypersong
