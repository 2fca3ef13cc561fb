#include "gram/interpret/stabilize.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gram/core/errors.h"

namespace gram::interpret {

int fold_into_tessitura(int pitch, int lo, int hi, int sweet_center) {
    if (pitch >= lo && pitch <= hi) return pitch;
    std::vector<int> candidates;
    const int pc_base = pitch % 12;
    for (int candidate = pc_base - 12 * 12; candidate <= 127 + 12; candidate += 12)
        if (candidate >= lo && candidate <= hi) candidates.push_back(candidate);
    if (candidates.empty())
        throw Unsatisfiable("pitch " + std::to_string(pitch) + " cannot be placed in [" +
                            std::to_string(lo) + "," + std::to_string(hi) + "]");
    int best = candidates.front();
    for (int candidate : candidates) {
        const int d_new = std::abs(candidate - pitch);
        const int d_best = std::abs(best - pitch);
        if (d_new < d_best ||
            (d_new == d_best &&
             std::abs(candidate - sweet_center) < std::abs(best - sweet_center)))
            best = candidate;
    }
    return best;
}

Rational snap_to_lattice(const Rational& duration, const Rational& reference) {
    Rational best(0);
    bool found = false;
    for (int k = -4; k <= 3; ++k) {
        Rational value = reference;
        if (k >= 0)
            for (int j = 0; j < k; ++j) value *= Rational(2);
        else
            for (int j = 0; j < -k; ++j) value = value / Rational(2);
        for (const Rational& v : {value, value * Rational(3, 2)}) {
            if (!found) { best = v; found = true; continue; }
            const Rational d_new = abs(duration - v);
            const Rational d_best = abs(duration - best);
            if (d_new < d_best || (d_new == d_best && v < best)) best = v;
        }
    }
    return best;
}

Composition stabilize(const Composition& comp, const StabilizeOptions& options) {
    Composition out = comp;
    for (std::size_t t = 0; t < out.notes.size(); ++t) {
        const TrackInfo& track = out.tracks[t];
        const int sweet_center = (track.sweet_lo + track.sweet_hi) / 2;
        for (Note& n : out.notes[t]) {
            n.duration = snap_to_lattice(n.duration, options.reference_duration);
            if (!n.is_rest) {
                n.pitch = fold_into_tessitura(n.pitch, track.tessitura_lo, track.tessitura_hi,
                                              sweet_center);
            }
        }
        // Polyphony cap: walk in emission order and drop the latest-added
        // voice whenever the simultaneous count would exceed the maximum.
        const int cap = std::max(1, track.max_polyphony);
        std::vector<Note> kept;
        for (const Note& n : out.notes[t]) {
            if (n.is_rest) { kept.push_back(n); continue; }
            int active = 0;
            for (const Note& k : kept)
                if (!k.is_rest && k.onset < n.end() && n.onset < k.end()) ++active;
            if (active < cap) kept.push_back(n);
        }
        out.notes[t] = std::move(kept);
    }
    out.sort_notes();
    return out;
}

}  // namespace gram::interpret
