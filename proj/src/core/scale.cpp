#include "gram/core/scale.h"

namespace gram {

const std::vector<Scale>& scale_table() {
    static const std::vector<Scale> table = {
        {"major", {0, 2, 4, 5, 7, 9, 11}},
        {"natural minor", {0, 2, 3, 5, 7, 8, 10}},
        {"chromatic", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}},
        {"dorian", {0, 2, 3, 5, 7, 9, 10}},
        {"mixolydian", {0, 2, 4, 5, 7, 9, 10}},
        {"major pentatonic", {0, 2, 4, 7, 9}},
        {"whole tone", {0, 2, 4, 6, 8, 10}},
    };
    return table;
}

const Scale& scale_by_id(int id) {
    const auto& table = scale_table();
    if (id < 0 || id >= static_cast<int>(table.size())) return table[0];
    return table[static_cast<std::size_t>(id)];
}

namespace {
// Floor division/modulo so negative degrees descend symmetrically.
int floor_div(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }
int floor_mod(int a, int b) { const int m = a % b; return m < 0 ? m + b : m; }
}  // namespace

int resolve_degree(const Scale& scale, int base_pitch, int degree, int chromatic_shift) {
    const int n = scale.size();
    const int octave = floor_div(degree, n);
    const int index = floor_mod(degree, n);
    return base_pitch + 12 * octave + scale.steps[static_cast<std::size_t>(index)] + chromatic_shift;
}

int degree_pitch_class(const Scale& scale, int tonic_pc, int degree) {
    const int n = scale.size();
    const int index = floor_mod(degree, n);
    return floor_mod(tonic_pc + scale.steps[static_cast<std::size_t>(index)], 12);
}

}  // namespace gram
