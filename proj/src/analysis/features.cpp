#include "gram/analysis/features.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "gram/core/errors.h"
#include "gram/notation/midi.h"

namespace gram::analysis {

const std::vector<std::string>& FeatureVector::names() {
    static const std::vector<std::string> list = [] {
        std::vector<std::string> n = {
            "instrument_count", "instrument_presence",
            "mean_simultaneous_voices", "max_simultaneous_voices",
            "note_density", "note_count",
            "mean_duration", "duration_variance",
            "mean_velocity", "velocity_variance",
            "pitch_range", "mean_pitch", "pitch_variance",
            "mean_melodic_interval", "chord_rate",
        };
        for (int i = 0; i < 12; ++i) n.push_back("pitch_class_" + std::to_string(i));
        for (int i = 0; i < 12; ++i) n.push_back("fifths_" + std::to_string(i));
        return n;
    }();
    return list;
}

namespace {

struct FlatNote {
    double onset;
    double duration;
    int pitch;
    int velocity;
    std::size_t track;
};

FeatureVector extract_impl(const std::vector<FlatNote>& notes,
                           const std::set<int>& programs, double total_seconds) {
    FeatureVector out;
    out.values.assign(FeatureVector::size(), 0.0);
    out.values[0] = static_cast<double>(programs.size());
    out.values[1] = static_cast<double>(programs.size()) / 128.0;
    if (notes.empty()) return out;

    // Texture: sounding-note count sampled at each note's midpoint.
    double simultaneous_sum = 0.0;
    double simultaneous_max = 0.0;
    for (const auto& probe : notes) {
        const double at = probe.onset + probe.duration / 2.0;
        int count = 0;
        for (const auto& n : notes)
            if (n.onset <= at && at < n.onset + n.duration) ++count;
        simultaneous_sum += count;
        simultaneous_max = std::max(simultaneous_max, static_cast<double>(count));
    }
    out.values[2] = simultaneous_sum / static_cast<double>(notes.size());
    out.values[3] = simultaneous_max;

    out.values[4] = total_seconds > 0 ? static_cast<double>(notes.size()) / total_seconds : 0.0;
    out.values[5] = static_cast<double>(notes.size());

    double dur_sum = 0, dur_sq = 0, vel_sum = 0, vel_sq = 0, pitch_sum = 0, pitch_sq = 0;
    int pitch_min = 127, pitch_max = 0;
    for (const auto& n : notes) {
        dur_sum += n.duration;
        dur_sq += n.duration * n.duration;
        vel_sum += n.velocity;
        vel_sq += static_cast<double>(n.velocity) * n.velocity;
        pitch_sum += n.pitch;
        pitch_sq += static_cast<double>(n.pitch) * n.pitch;
        pitch_min = std::min(pitch_min, n.pitch);
        pitch_max = std::max(pitch_max, n.pitch);
    }
    const double count = static_cast<double>(notes.size());
    const auto variance = [count](double sum, double sq) {
        const double mean = sum / count;
        return std::max(0.0, sq / count - mean * mean);
    };
    out.values[6] = dur_sum / count;
    out.values[7] = variance(dur_sum, dur_sq);
    out.values[8] = vel_sum / count;
    out.values[9] = variance(vel_sum, vel_sq);
    out.values[10] = pitch_max - pitch_min;
    out.values[11] = pitch_sum / count;
    out.values[12] = variance(pitch_sum, pitch_sq);

    // Melody: mean absolute interval between successive notes per track.
    double interval_sum = 0.0;
    int interval_count = 0;
    std::set<std::size_t> tracks;
    for (const auto& n : notes) tracks.insert(n.track);
    for (std::size_t t : tracks) {
        std::vector<const FlatNote*> line;
        for (const auto& n : notes)
            if (n.track == t) line.push_back(&n);
        std::sort(line.begin(), line.end(), [](const FlatNote* a, const FlatNote* b) {
            return a->onset != b->onset ? a->onset < b->onset : a->pitch < b->pitch;
        });
        for (std::size_t i = 1; i < line.size(); ++i) {
            interval_sum += std::abs(line[i]->pitch - line[i - 1]->pitch);
            ++interval_count;
        }
    }
    out.values[13] = interval_count ? interval_sum / interval_count : 0.0;

    // Chords: fraction of distinct onsets carrying 2+ simultaneous starts.
    std::vector<double> onsets;
    for (const auto& n : notes) onsets.push_back(n.onset);
    std::sort(onsets.begin(), onsets.end());
    onsets.erase(std::unique(onsets.begin(), onsets.end()), onsets.end());
    int chordal = 0;
    for (double at : onsets) {
        int starts = 0;
        for (const auto& n : notes)
            if (n.onset == at) ++starts;
        if (starts >= 2) ++chordal;
    }
    out.values[14] = onsets.empty() ? 0.0 : static_cast<double>(chordal) / onsets.size();

    for (const auto& n : notes) {
        const int pc = ((n.pitch % 12) + 12) % 12;
        out.values[15 + static_cast<std::size_t>(pc)] += 1.0;
        out.values[27 + static_cast<std::size_t>((pc * 7) % 12)] += 1.0;
    }
    for (std::size_t i = 15; i < 39; ++i) out.values[i] /= count;
    return out;
}

}  // namespace

FeatureVector extract_features(const Composition& comp) {
    std::vector<FlatNote> notes;
    std::set<int> programs;
    for (std::size_t t = 0; t < comp.notes.size(); ++t) {
        bool sounds = false;
        for (const Note& n : comp.notes[t]) {
            if (n.is_rest) continue;
            notes.push_back({n.onset.to_double(), n.duration.to_double(), n.pitch, n.velocity, t});
            sounds = true;
        }
        if (sounds) programs.insert(comp.tracks[t].midi_program);
    }
    return extract_impl(notes, programs, comp.total_seconds());
}

FeatureVector extract_features_midi(const std::vector<std::uint8_t>& midi_bytes) {
    const auto parsed = notation::parse_midi(midi_bytes);
    const double division = parsed.division > 0 ? parsed.division : 480.0;
    std::vector<FlatNote> notes;
    std::set<int> programs;
    long max_tick = 0;
    for (std::size_t t = 0; t < parsed.tracks.size(); ++t) {
        const auto& track = parsed.tracks[t];
        if (!track.notes.empty() && track.program >= 0) programs.insert(track.program);
        for (const auto& n : track.notes) {
            notes.push_back({n.on_tick / division, (n.off_tick - n.on_tick) / division, n.key,
                             n.velocity, t});
            max_tick = std::max(max_tick, n.off_tick);
        }
    }
    // Seconds through the tempo map (piecewise, like the writer's inverse).
    double seconds = 0.0;
    {
        double usec_per_quarter = 500000.0;
        long cursor = 0;
        std::vector<notation::MidiTempo> tempos = parsed.tempos;
        std::sort(tempos.begin(), tempos.end(),
                  [](const notation::MidiTempo& a, const notation::MidiTempo& b) {
                      return a.tick < b.tick;
                  });
        for (const auto& ev : tempos) {
            if (ev.tick >= max_tick) break;
            seconds += (ev.tick - cursor) / division * usec_per_quarter / 1e6;
            cursor = ev.tick;
            usec_per_quarter = static_cast<double>(ev.usec_per_quarter);
        }
        seconds += (max_tick - cursor) / division * usec_per_quarter / 1e6;
    }
    return extract_impl(notes, programs, seconds);
}

FeatureVector centroid(const std::vector<FeatureVector>& vectors) {
    if (vectors.empty()) throw Error("centroid of an empty set");
    FeatureVector out;
    out.values.assign(FeatureVector::size(), 0.0);
    for (const auto& v : vectors)
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += v.values[i];
    for (auto& v : out.values) v /= static_cast<double>(vectors.size());
    return out;
}

}  // namespace gram::analysis
