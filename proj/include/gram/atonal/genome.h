#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gram::atonal {

/// One symbol of the L-system alphabet. Structural symbols "#k" carry the
/// rule index they reference; operators "$id" the operator code; property
/// arguments "@n" the value consumed by the next parametric operator.
struct Symbol {
    enum class Kind { Structural, Operator, Argument };
    Kind kind = Kind::Structural;
    int value = 0;

    static Symbol structural(int k) { return {Kind::Structural, k}; }
    static Symbol op(int id) { return {Kind::Operator, id}; }
    static Symbol arg(int n) { return {Kind::Argument, n}; }

    bool operator==(const Symbol&) const = default;
};

using SymbolString = std::vector<Symbol>;

// Operator codes used directly by the engine.
inline constexpr int kOpPitchUp = 1;
inline constexpr int kOpPitchDown = 2;
inline constexpr int kOpDurUp = 3;
inline constexpr int kOpDurDown = 4;
inline constexpr int kOpPushPitch = 5;
inline constexpr int kOpPopPitch = 6;
inline constexpr int kOpPushTime = 7;
inline constexpr int kOpPopTime = 8;
inline constexpr int kOpChordNext = 70;
inline constexpr int kOpGraceNext = 73;
inline constexpr int kOpDynamicBase = 92;   // 92..99 -> ppp..fff
inline constexpr int kOpPushGlobal = 100;
inline constexpr int kOpPopGlobal = 101;
inline constexpr int kOpTempo = 102;
inline constexpr int kOpArpeggioNext = 110;
inline constexpr int kOpPitchAlter = 120;

/// True when `id` is a defined operator code of the atonal alphabet.
bool is_known_operator(int id);

/// True for operators that consume the pending "@" property argument.
bool is_parametric_operator(int id);

/// Per-rule parameters: iterativity weight, the per-track duration factor,
/// the instrument, the scale and the allowed pitch range.
struct Rule {
    double iterativity = 1.0;      // I_i
    double duration_factor = 1.0;
    int instrument_id = 0;         // kRestInstrument marks the musical-rest rule
    int scale_id = 0;
    int tessitura_lo = 0;
    int tessitura_hi = 127;
    SymbolString rhs;

    bool operator==(const Rule&) const = default;
};

/// Deterministic L-system genome plus the epigenetic global parameters.
/// Rule k is the production for "#k"; rule 0 is the axiom's rule.
struct Genome {
    double initial_iteration = 1.0;  // T, starting value of every r_i
    double base_duration = 1.0;      // beats
    double duration_step = 0.5;      // beats
    std::vector<Rule> rules;

    bool operator==(const Genome&) const = default;

    /// Throws if a structural reference leaves the rule table or a bound
    /// is out of range. Used by parsing and by the genetic operators.
    void validate() const;
};

/// Reads the two-level ".gen" layout: "T base_duration duration_step" on
/// the first line, then one "I_i duration_factor instrument_id scale_id
/// tess_lo tess_hi RHS" line per rule.
Genome parse_gen(const std::string& text);
Genome parse_gen_file(const std::string& path);

std::string serialize_gen(const Genome& genome);

/// Renders a symbol string in genome notation ("@60$102$96#2...").
std::string to_text(const SymbolString& symbols);

/// Parses an RHS fragment in genome notation.
SymbolString rhs_from_text(const std::string& text);

}  // namespace gram::atonal
