#pragma once

#include "gram/core/composition.h"

namespace gram::interpret {

struct StabilizeOptions {
    Rational reference_duration{1};  // lattice root, in beats
};

/// Nearest octave placement of `pitch` into [lo, hi]; ties lean toward
/// `sweet_center`. Exposed for the brute-force oracle tests.
int fold_into_tessitura(int pitch, int lo, int hi, int sweet_center);

/// Nearest value of the note-value lattice: reference times powers of two
/// plus their dotted variants. Ties prefer the shorter value.
Rational snap_to_lattice(const Rational& duration, const Rational& reference);

/// Enforces physical constraints on a raw composition: pitches folded
/// into each track's tessitura, durations snapped to the lattice and
/// per-track polyphony capped by dropping the latest-added voices.
Composition stabilize(const Composition& comp, const StabilizeOptions& options = {});

}  // namespace gram::interpret
