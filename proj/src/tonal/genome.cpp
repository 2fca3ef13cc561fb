#include "gram/tonal/genome.h"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gram/core/errors.h"
#include "gram/core/instruments.h"

namespace gram::tonal {

int operator_arity(Symbol::Kind kind) {
    switch (kind) {
        case Symbol::Kind::Chord: return 4;
        case Symbol::Kind::Accent: return 1;
        case Symbol::Kind::Dynamic: return 2;
        case Symbol::Kind::RhythmAlter: return 3;
        case Symbol::Kind::NoteRestFlip: return 3;
        case Symbol::Kind::PitchAlter: return 4;
        case Symbol::Kind::Window: return 2;
        case Symbol::Kind::Suppress: return 1;
        case Symbol::Kind::Anacrusis: return 2;
        default: return -1;
    }
}

bool is_registered_extended(int code, int arg_count) {
    switch (code) {
        case kExtTempo:
        case kExtMode:
        case kExtChord:
            return arg_count == 1;
        case kExtTie:
            return arg_count == 0;
        default:
            return false;
    }
}

namespace {

bool is_arg_char(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-';
}

/// Reserved letters that are always operators, argument list or not.
bool is_simple_reserved(char c) {
    return c == 'N' || c == 'n' || c == 'T' || c == 't' || c == 'R' || c == 'r';
}

Symbol::Kind parametric_kind(char c) {
    switch (c) {
        case 'M': return Symbol::Kind::Chord;
        case 'v': return Symbol::Kind::Accent;
        case 'W': return Symbol::Kind::Dynamic;
        case 'C': return Symbol::Kind::RhythmAlter;
        case 'V': return Symbol::Kind::NoteRestFlip;
        case 'p': return Symbol::Kind::PitchAlter;
        case 'w': return Symbol::Kind::Window;
        case 'X': return Symbol::Kind::Suppress;
        case 'Y': return Symbol::Kind::Anacrusis;
        default: return Symbol::Kind::NonTerminal;  // sentinel: not parametric
    }
}

std::vector<int> parse_args(const std::string& text, std::size_t& i, char op) {
    std::size_t start = i;
    while (i < text.size() && is_arg_char(text[i])) ++i;
    const std::string span = text.substr(start, i - start);
    std::vector<int> args;
    std::size_t pos = 0;
    while (pos <= span.size()) {
        std::size_t dot = span.find('.', pos);
        const std::string piece =
            dot == std::string::npos ? span.substr(pos) : span.substr(pos, dot - pos);
        if (piece.empty())
            throw ArityError(std::string("operator '") + op + "' has an empty argument");
        try {
            std::size_t used = 0;
            args.push_back(std::stoi(piece, &used));
            if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw ArityError(std::string("operator '") + op + "': bad argument \"" + piece + "\"");
        }
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return args;
}

/// Raw token before non-terminal/instrument resolution.
struct RawSymbol {
    Symbol symbol;     // fully-formed unless bare
    char bare = 0;     // set for bare letters awaiting binding
};

std::vector<RawSymbol> tokenize_rhs(const std::string& text) {
    std::vector<RawSymbol> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        ++i;
        switch (c) {
            case '[': out.push_back({Symbol::simple(Symbol::Kind::Push)}); continue;
            case ']': out.push_back({Symbol::simple(Symbol::Kind::Pop)}); continue;
            case '<': out.push_back({Symbol::simple(Symbol::Kind::PushTime)}); continue;
            case '>': out.push_back({Symbol::simple(Symbol::Kind::PopTime)}); continue;
            default: break;
        }
        if (is_simple_reserved(c)) {
            switch (c) {
                case 'N': out.push_back({Symbol::simple(Symbol::Kind::PitchUp)}); break;
                case 'n': out.push_back({Symbol::simple(Symbol::Kind::PitchDown)}); break;
                case 'T': out.push_back({Symbol::simple(Symbol::Kind::ToneUp)}); break;
                case 't': out.push_back({Symbol::simple(Symbol::Kind::ToneDown)}); break;
                case 'R': out.push_back({Symbol::simple(Symbol::Kind::DurUp)}); break;
                case 'r': out.push_back({Symbol::simple(Symbol::Kind::DurDown)}); break;
            }
            continue;
        }
        if (c == '$') {
            auto args = parse_args(text, i, c);
            if (args.empty()) throw ArityError("'$' needs at least a code");
            const int code = args.front();
            args.erase(args.begin());
            if (!is_registered_extended(code, static_cast<int>(args.size())))
                throw UnknownSymbol("$" + std::to_string(code) + " with " +
                                    std::to_string(args.size()) + " argument(s) is not registered");
            Symbol s = Symbol::with_args(Symbol::Kind::Extended, std::move(args));
            s.args.insert(s.args.begin(), code);
            out.push_back({s});
            continue;
        }
        const Symbol::Kind pk = parametric_kind(c);
        if (pk != Symbol::Kind::NonTerminal && i < text.size() && is_arg_char(text[i])) {
            auto args = parse_args(text, i, c);
            const int arity = operator_arity(pk);
            if (static_cast<int>(args.size()) != arity)
                throw ArityError(std::string("operator '") + c + "' takes " +
                                 std::to_string(arity) + " arguments, got " +
                                 std::to_string(args.size()));
            out.push_back({Symbol::with_args(pk, std::move(args))});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            RawSymbol raw;
            raw.bare = c;
            out.push_back(raw);
            continue;
        }
        throw UnknownSymbol(std::string("unexpected character '") + c + "'");
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(sep, pos);
        if (next == std::string::npos) { out.push_back(text.substr(pos)); break; }
        out.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& section, const char* what) {
    std::istringstream in(section);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw MalformedGlobals(std::string(what) + ": cannot read \"" + token + "\"");
        }
    }
    return out;
}

Rational rational_from_field(double v) {
    // Globals are written with at most 3 decimals.
    return Rational(static_cast<std::int64_t>(v * 1000.0 + (v >= 0 ? 0.5 : -0.5)), 1000);
}

std::string rational_to_field(const Rational& r) {
    if (r.den() == 1) return std::to_string(r.num());
    const double v = r.to_double();
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

void Genome::validate() const {
    if (levels.empty()) throw HierarchyViolation("genome has no rule levels");
    if (levels[0].size() != 1) throw HierarchyViolation("level 0 must hold exactly the axiom rule");
    if (globals.base_duration <= Rational(0)) throw MalformedGlobals("base duration must be positive");
    if (globals.duration_step <= Rational(0)) throw MalformedGlobals("duration step must be positive");
    for (const auto& track : tracks) {
        if (track.tessitura_lo < 0 || track.tessitura_hi > 127 ||
            track.tessitura_lo > track.tessitura_hi)
            throw MalformedGlobals("track tessitura out of range");
        if (track.velocity_lo < 0 || track.velocity_hi > 127 ||
            track.velocity_lo > track.velocity_hi)
            throw MalformedGlobals("track velocity range out of range");
    }
    for (int d = 0; d < level_count(); ++d) {
        std::set<int> used;
        for (const auto& rule : levels[static_cast<std::size_t>(d)]) {
            for (const auto& s : rule.rhs) {
                if (s.kind == Symbol::Kind::NonTerminal) {
                    if (d + 1 >= level_count())
                        throw HierarchyViolation("non-terminal in the final level");
                    if (s.level != d + 1)
                        throw HierarchyViolation("non-terminal skips levels");
                    if (s.ref < 0 || s.ref >= static_cast<int>(levels[static_cast<std::size_t>(d + 1)].size()))
                        throw HierarchyViolation("non-terminal has no rule in the next level");
                    used.insert(s.ref);
                } else if (s.kind == Symbol::Kind::Instrument) {
                    if (s.ref < 0 || s.ref >= static_cast<int>(tracks.size()))
                        throw HierarchyViolation("instrument symbol without a track");
                } else if (operator_arity(s.kind) >= 0 &&
                           static_cast<int>(s.args.size()) != operator_arity(s.kind)) {
                    throw ArityError("operator with wrong stored arity");
                }
            }
        }
        if (d + 1 < level_count() &&
            used.size() != levels[static_cast<std::size_t>(d + 1)].size())
            throw HierarchyViolation("level " + std::to_string(d + 1) +
                                     " rule count does not match the non-terminals introduced");
    }
}

Genome parse_evg(const std::string& text) {
    // Strip newlines: the layout is separator-based.
    std::string flat;
    flat.reserve(text.size());
    for (char c : text)
        if (c != '\n' && c != '\r') flat += c;

    const auto level_chunks = split(flat, '|');
    if (level_chunks.size() < 2)
        throw MalformedGlobals("an .evg document needs a header level and at least one rule level");

    Genome genome;
    const auto sections = split(level_chunks[0], ';');
    if (sections.empty()) throw MalformedGlobals("missing globals section");
    const auto g = parse_numbers(sections[0], "globals");
    if (g.size() != 7)
        throw MalformedGlobals("globals need 7 values (dynamic tempo chord mode baseDur durStep style)");
    genome.globals.initial_dynamic = static_cast<int>(g[0]);
    genome.globals.initial_tempo = g[1];
    genome.globals.initial_chord = static_cast<int>(g[2]);
    genome.globals.initial_mode = static_cast<int>(g[3]);
    genome.globals.base_duration = rational_from_field(g[4]);
    genome.globals.duration_step = rational_from_field(g[5]);
    genome.globals.style_id = static_cast<int>(g[6]);
    if (genome.globals.initial_dynamic < 0 || genome.globals.initial_dynamic > 7)
        throw MalformedGlobals("initial dynamic must be 0..7");

    for (std::size_t s = 1; s < sections.size(); ++s) {
        bool blank = true;
        for (char c : sections[s])
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (blank && s + 1 == sections.size()) continue;  // trailing separator
        const auto v = parse_numbers(sections[s], "track");
        if (v.size() != 8)
            throw MalformedGlobals("track section needs 8 values (midi pitch tessLo tessHi velLo velHi role instrument)");
        TrackSpec track;
        track.midi_program = static_cast<int>(v[0]);
        track.initial_pitch = static_cast<int>(v[1]);
        track.tessitura_lo = static_cast<int>(v[2]);
        track.tessitura_hi = static_cast<int>(v[3]);
        track.velocity_lo = static_cast<int>(v[4]);
        track.velocity_hi = static_cast<int>(v[5]);
        track.role_id = static_cast<int>(v[6]);
        track.instrument_id = static_cast<int>(v[7]);
        genome.tracks.push_back(track);
    }

    const int level_count = static_cast<int>(level_chunks.size()) - 1;
    std::vector<std::vector<std::vector<RawSymbol>>> raw_levels;
    for (int d = 0; d < level_count; ++d) {
        const auto rule_chunks = split(level_chunks[static_cast<std::size_t>(d) + 1], ';');
        std::vector<std::vector<RawSymbol>> rules;
        for (const auto& chunk : rule_chunks) rules.push_back(tokenize_rhs(chunk));
        raw_levels.push_back(std::move(rules));
    }
    if (raw_levels.empty() || raw_levels[0].size() != 1)
        throw HierarchyViolation("the first rule level must hold exactly the axiom rule");

    // Resolve bare characters: non-terminals by first appearance per level,
    // instruments (final level only) by first appearance across tracks.
    genome.levels.resize(static_cast<std::size_t>(level_count));
    std::vector<std::vector<char>> level_names(static_cast<std::size_t>(level_count));
    level_names[0] = {'Z'};
    std::map<char, int> instrument_binding;
    for (int d = 0; d < level_count; ++d) {
        const bool final_level = d + 1 == level_count;
        std::map<char, int> ordinal_of;
        for (auto& raw_rule : raw_levels[static_cast<std::size_t>(d)]) {
            Rule rule;
            for (auto& raw : raw_rule) {
                if (raw.bare == 0) { rule.rhs.push_back(raw.symbol); continue; }
                if (!final_level) {
                    auto it = ordinal_of.find(raw.bare);
                    if (it == ordinal_of.end())
                        it = ordinal_of.emplace(raw.bare, static_cast<int>(ordinal_of.size())).first;
                    rule.rhs.push_back(Symbol::nonterminal(d + 1, it->second, raw.bare));
                } else {
                    auto it = instrument_binding.find(raw.bare);
                    if (it == instrument_binding.end()) {
                        const int next = static_cast<int>(instrument_binding.size());
                        if (next >= static_cast<int>(genome.tracks.size()))
                            throw MalformedGlobals(std::string("instrument symbol '") + raw.bare +
                                                   "' has no track section");
                        it = instrument_binding.emplace(raw.bare, next).first;
                        genome.tracks[static_cast<std::size_t>(next)].symbol = raw.bare;
                    }
                    rule.rhs.push_back(Symbol::instrument(it->second, raw.bare));
                }
            }
            genome.levels[static_cast<std::size_t>(d)].push_back(std::move(rule));
        }
        if (!final_level) {
            auto& next_rules = raw_levels[static_cast<std::size_t>(d) + 1];
            if (next_rules.size() != ordinal_of.size())
                throw HierarchyViolation("level " + std::to_string(d + 1) + " has " +
                                         std::to_string(next_rules.size()) + " rules but level " +
                                         std::to_string(d) + " introduces " +
                                         std::to_string(ordinal_of.size()) + " non-terminals");
            level_names[static_cast<std::size_t>(d + 1)].resize(ordinal_of.size());
            for (const auto& [ch, ord] : ordinal_of)
                level_names[static_cast<std::size_t>(d + 1)][static_cast<std::size_t>(ord)] = ch;
        }
    }
    for (std::size_t d = 0; d < genome.levels.size(); ++d)
        for (std::size_t j = 0; j < genome.levels[d].size() && j < level_names[d].size(); ++j)
            genome.levels[d][j].name = level_names[d][j];

    genome.validate();
    return genome;
}

Genome parse_evg_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_evg(buf.str());
}

namespace {

std::string args_text(const std::vector<int>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(args[i]);
    }
    return out;
}

}  // namespace

std::string render_symbol(const Genome& genome, const Symbol& s) {
    switch (s.kind) {
        case Symbol::Kind::PitchUp: return "N";
        case Symbol::Kind::PitchDown: return "n";
        case Symbol::Kind::ToneUp: return "T";
        case Symbol::Kind::ToneDown: return "t";
        case Symbol::Kind::DurUp: return "R";
        case Symbol::Kind::DurDown: return "r";
        case Symbol::Kind::Push: return "[";
        case Symbol::Kind::Pop: return "]";
        case Symbol::Kind::PushTime: return "<";
        case Symbol::Kind::PopTime: return ">";
        case Symbol::Kind::Chord: return "M" + args_text(s.args);
        case Symbol::Kind::Accent: return "v" + args_text(s.args);
        case Symbol::Kind::Dynamic: return "W" + args_text(s.args);
        case Symbol::Kind::RhythmAlter: return "C" + args_text(s.args);
        case Symbol::Kind::NoteRestFlip: return "V" + args_text(s.args);
        case Symbol::Kind::PitchAlter: return "p" + args_text(s.args);
        case Symbol::Kind::Window: return "w" + args_text(s.args);
        case Symbol::Kind::Suppress: return "X" + args_text(s.args);
        case Symbol::Kind::Anacrusis: return "Y" + args_text(s.args);
        case Symbol::Kind::Extended: return "$" + args_text(s.args);
        case Symbol::Kind::NonTerminal: {
            // The owning rule's name is authoritative; canonicalize may
            // have reordered rules since the symbol was created.
            if (s.level >= 0 && s.level < genome.level_count() &&
                s.ref >= 0 && s.ref < static_cast<int>(genome.levels[static_cast<std::size_t>(s.level)].size())) {
                const char n = genome.levels[static_cast<std::size_t>(s.level)][static_cast<std::size_t>(s.ref)].name;
                if (n) return std::string(1, n);
            }
            return s.name ? std::string(1, s.name) : "?";
        }
        case Symbol::Kind::Instrument: {
            if (s.ref >= 0 && s.ref < static_cast<int>(genome.tracks.size()))
                return std::string(1, genome.tracks[static_cast<std::size_t>(s.ref)].symbol);
            return s.name ? std::string(1, s.name) : "?";
        }
        case Symbol::Kind::UnitBegin:
        case Symbol::Kind::UnitEnd:
        case Symbol::Kind::SuppressBegin:
        case Symbol::Kind::SuppressEnd:
            return "";
    }
    return "";
}

std::string render(const Genome& genome, const SymbolString& symbols) {
    std::string out;
    for (const Symbol& s : symbols) out += render_symbol(genome, s);
    return out;
}

void canonicalize(Genome& genome) {
    // Non-terminal ordinals by first appearance per level.
    for (int d = 0; d + 1 < genome.level_count(); ++d) {
        const auto next_size = genome.levels[static_cast<std::size_t>(d + 1)].size();
        std::vector<int> remap(next_size, -1);
        int assigned = 0;
        for (const auto& rule : genome.levels[static_cast<std::size_t>(d)])
            for (const auto& s : rule.rhs)
                if (s.kind == Symbol::Kind::NonTerminal && s.ref >= 0 &&
                    s.ref < static_cast<int>(next_size) && remap[static_cast<std::size_t>(s.ref)] < 0)
                    remap[static_cast<std::size_t>(s.ref)] = assigned++;
        for (std::size_t j = 0; j < next_size; ++j)
            if (remap[j] < 0) remap[j] = assigned++;
        std::vector<Rule> reordered(next_size);
        for (std::size_t j = 0; j < next_size; ++j)
            reordered[static_cast<std::size_t>(remap[j])] =
                std::move(genome.levels[static_cast<std::size_t>(d + 1)][j]);
        genome.levels[static_cast<std::size_t>(d + 1)] = std::move(reordered);
        for (auto& rule : genome.levels[static_cast<std::size_t>(d)])
            for (auto& s : rule.rhs)
                if (s.kind == Symbol::Kind::NonTerminal && s.ref >= 0 &&
                    s.ref < static_cast<int>(next_size))
                    s.ref = remap[static_cast<std::size_t>(s.ref)];
    }
    // Track sections by first appearance in the final level.
    if (genome.levels.empty() || genome.tracks.empty()) return;
    std::vector<int> remap(genome.tracks.size(), -1);
    int assigned = 0;
    for (const auto& rule : genome.levels.back())
        for (const auto& s : rule.rhs)
            if (s.kind == Symbol::Kind::Instrument && s.ref >= 0 &&
                s.ref < static_cast<int>(genome.tracks.size()) &&
                remap[static_cast<std::size_t>(s.ref)] < 0)
                remap[static_cast<std::size_t>(s.ref)] = assigned++;
    for (std::size_t t = 0; t < genome.tracks.size(); ++t)
        if (remap[t] < 0) remap[t] = assigned++;
    std::vector<TrackSpec> reordered(genome.tracks.size());
    for (std::size_t t = 0; t < genome.tracks.size(); ++t)
        reordered[static_cast<std::size_t>(remap[t])] = genome.tracks[t];
    genome.tracks = std::move(reordered);
    for (auto& level : genome.levels)
        for (auto& rule : level)
            for (auto& s : rule.rhs)
                if (s.kind == Symbol::Kind::Instrument && s.ref >= 0 &&
                    s.ref < static_cast<int>(genome.tracks.size()))
                    s.ref = remap[static_cast<std::size_t>(s.ref)];
}

std::string serialize_evg(const Genome& genome) {
    std::ostringstream out;
    const auto& g = genome.globals;
    out << g.initial_dynamic << ' ' << g.initial_tempo << ' ' << g.initial_chord << ' '
        << g.initial_mode << ' ' << rational_to_field(g.base_duration) << ' '
        << rational_to_field(g.duration_step) << ' ' << g.style_id;
    for (const auto& track : genome.tracks) {
        out << ';' << track.midi_program << ' ' << track.initial_pitch << ' '
            << track.tessitura_lo << ' ' << track.tessitura_hi << ' ' << track.velocity_lo << ' '
            << track.velocity_hi << ' ' << track.role_id << ' ' << track.instrument_id;
    }
    for (const auto& level : genome.levels) {
        out << '|';
        for (std::size_t j = 0; j < level.size(); ++j) {
            if (j) out << ';';
            out << render(genome, level[j].rhs);
        }
    }
    return out.str();
}

}  // namespace gram::tonal
