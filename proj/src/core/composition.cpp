#include "gram/core/composition.h"

#include <algorithm>

namespace gram {

bool Composition::empty() const {
    for (const auto& track : notes)
        if (!track.empty()) return false;
    return true;
}

std::vector<std::size_t> Composition::sounding_tracks() const {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < notes.size(); ++t) {
        const bool sounds = std::any_of(notes[t].begin(), notes[t].end(),
                                        [](const Note& n) { return !n.is_rest; });
        if (sounds) out.push_back(t);
    }
    return out;
}

Rational Composition::total_beats() const {
    Rational last(0);
    for (const auto& track : notes)
        for (const auto& n : track)
            if (n.end() > last) last = n.end();
    return last;
}

double Composition::beats_to_seconds(const Rational& beat) const {
    double bpm = initial_bpm;
    Rational pos(0);
    double seconds = 0.0;
    for (const auto& ev : tempo) {
        if (ev.beat >= beat) break;
        if (ev.beat > pos) {
            seconds += (ev.beat - pos).to_double() * 60.0 / bpm;
            pos = ev.beat;
        }
        bpm = ev.bpm;
    }
    seconds += (beat - pos).to_double() * 60.0 / bpm;
    return seconds;
}

void Composition::sort_notes() {
    for (auto& track : notes)
        std::stable_sort(track.begin(), track.end(),
                         [](const Note& a, const Note& b) { return a.onset < b.onset; });
}

std::vector<StructureUnit> Composition::units_of_level(int level) const {
    std::vector<StructureUnit> out;
    for (const auto& u : structure)
        if (u.level == level) out.push_back(u);
    std::sort(out.begin(), out.end(),
              [](const StructureUnit& a, const StructureUnit& b) { return a.start < b.start; });
    return out;
}

int simultaneous_at(const Composition& comp, std::size_t track, const Rational& beat) {
    int count = 0;
    for (const auto& n : comp.notes[track])
        if (!n.is_rest && n.onset <= beat && beat < n.end()) ++count;
    return count;
}

}  // namespace gram
