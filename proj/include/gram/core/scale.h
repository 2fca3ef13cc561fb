#pragma once

#include <string>
#include <vector>

namespace gram {

/// Interval pattern of a musical mode, in semitones above the tonic.
struct Scale {
    std::string name;
    std::vector<int> steps;  // strictly increasing, first entry 0, all < 12

    int size() const { return static_cast<int>(steps.size()); }
};

/// Built-in scale/mode table indexed by the genome's scale_id / mode_id.
/// 0=major, 1=natural minor, 2=chromatic, 3=dorian, 4=mixolydian,
/// 5=major pentatonic, 6=whole tone. Documented in the README.
const std::vector<Scale>& scale_table();

const Scale& scale_by_id(int id);  // clamps unknown ids to major

/// MIDI pitch of scale degree `degree` relative to `base_pitch` as tonic.
/// Degree 0 is the base pitch itself; degrees extend over octaves in both
/// directions. `chromatic_shift` is applied after scale resolution.
int resolve_degree(const Scale& scale, int base_pitch, int degree, int chromatic_shift = 0);

/// Pitch class (0..11) of a scale degree when the tonic has pitch class
/// `tonic_pc`. Used to resolve harmonic roots.
int degree_pitch_class(const Scale& scale, int tonic_pc, int degree);

}  // namespace gram
