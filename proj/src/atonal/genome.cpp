#include "gram/atonal/genome.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include "gram/core/errors.h"
#include "gram/core/instruments.h"

namespace gram::atonal {

bool is_known_operator(int id) {
    if (id >= 1 && id <= 23) return true;     // pitch/duration/stacks/articulations
    if (id >= 30 && id <= 47) return true;    // effect1..effect6
    if (id >= 61 && id <= 75) return true;    // crescendo/diminuendo/fermata/chord/grace
    if (id >= 92 && id <= 102) return true;   // dynamics, global stack, tempo
    if (id >= 110 && id <= 118) return true;  // arpeggio, mordents
    if (id == 120) return true;               // pitch alteration
    return false;
}

bool is_parametric_operator(int id) {
    switch (id) {
        case kOpChordNext:
        case kOpChordNext + 1:     // latched chord
        case kOpGraceNext:
        case kOpGraceNext + 1:     // latched grace
        case kOpTempo:
        case kOpArpeggioNext:
        case kOpArpeggioNext + 1:  // latched arpeggio
        case kOpPitchAlter:
            return true;
        default:
            return false;
    }
}

void Genome::validate() const {
    if (rules.empty()) throw MalformedRule("genome has no rules");
    if (base_duration <= 0) throw MalformedHeader("base duration must be positive");
    if (duration_step <= 0) throw MalformedHeader("duration step must be positive");
    for (std::size_t k = 0; k < rules.size(); ++k) {
        const Rule& rule = rules[k];
        if (rule.tessitura_lo < 0 || rule.tessitura_hi > 127 || rule.tessitura_lo > rule.tessitura_hi)
            throw MalformedRule("rule " + std::to_string(k) + ": bad tessitura");
        for (const Symbol& s : rule.rhs) {
            if (s.kind == Symbol::Kind::Structural &&
                (s.value < 0 || s.value >= static_cast<int>(rules.size())))
                throw DanglingReference("#" + std::to_string(s.value) + " has no rule");
            if (s.kind == Symbol::Kind::Operator && !is_known_operator(s.value))
                throw UnknownSymbol("$" + std::to_string(s.value) + " is not in the alphabet");
        }
    }
}

SymbolString rhs_from_text(const std::string& text) {
    SymbolString out;
    std::size_t i = 0;
    const auto read_int = [&](bool allow_sign) {
        std::size_t start = i;
        if (allow_sign && i < text.size() && text[i] == '-') ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start || (text[start] == '-' && i == start + 1))
            throw MalformedRule("expected number at position " + std::to_string(start) +
                                " in RHS \"" + text + "\"");
        return std::stoi(text.substr(start, i - start));
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        ++i;
        switch (c) {
            case '#': out.push_back(Symbol::structural(read_int(false))); break;
            case '$': {
                const int id = read_int(false);
                if (!is_known_operator(id))
                    throw UnknownSymbol("$" + std::to_string(id) + " is not in the alphabet");
                out.push_back(Symbol::op(id));
                break;
            }
            case '@': out.push_back(Symbol::arg(read_int(true))); break;
            default:
                throw UnknownSymbol(std::string("unexpected character '") + c + "' in RHS");
        }
    }
    return out;
}

std::string to_text(const SymbolString& symbols) {
    std::string out;
    for (const Symbol& s : symbols) {
        switch (s.kind) {
            case Symbol::Kind::Structural: out += "#" + std::to_string(s.value); break;
            case Symbol::Kind::Operator: out += "$" + std::to_string(s.value); break;
            case Symbol::Kind::Argument: out += "@" + std::to_string(s.value); break;
        }
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line, std::size_t max_fields) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < line.size() && fields.size() < max_fields) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        fields.push_back(line.substr(start, i - start));
    }
    // Remainder (the RHS) as one trailing field.
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i < line.size()) fields.push_back(line.substr(i));
    return fields;
}

double parse_real(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw MalformedHeader(std::string("cannot read ") + what + " from \"" + s + "\"");
    }
}

int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw MalformedRule(std::string("cannot read ") + what + " from \"" + s + "\"");
    }
}

}  // namespace

Genome parse_gen(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Genome genome;
    bool header_done = false;
    while (std::getline(in, line)) {
        // Strip comments and blank lines.
        if (auto hash = line.find("//"); hash != std::string::npos) line.resize(hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (blank) continue;

        if (!header_done) {
            std::istringstream hs(line);
            std::string a, b, c, extra;
            hs >> a >> b >> c;
            if (hs >> extra) throw MalformedHeader("header line has more than three values");
            if (c.empty()) throw MalformedHeader("header line needs three values");
            genome.initial_iteration = parse_real(a, "initial iteration T");
            genome.base_duration = parse_real(b, "base duration");
            genome.duration_step = parse_real(c, "duration step");
            header_done = true;
            continue;
        }

        const auto fields = split_fields(line, 6);
        if (fields.size() < 7)
            throw MalformedRule("rule line needs six parameters and an RHS: \"" + line + "\"");
        Rule rule;
        rule.iterativity = parse_real(fields[0], "iterativity");
        rule.duration_factor = parse_real(fields[1], "duration factor");
        rule.instrument_id = parse_int(fields[2], "instrument id");
        rule.scale_id = parse_int(fields[3], "scale id");
        rule.tessitura_lo = parse_int(fields[4], "tessitura low");
        rule.tessitura_hi = parse_int(fields[5], "tessitura high");
        rule.rhs = rhs_from_text(fields[6]);
        genome.rules.push_back(std::move(rule));
    }
    if (!header_done) throw MalformedHeader("empty genome file");
    genome.validate();
    return genome;
}

Genome parse_gen_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_gen(buf.str());
}

namespace {
std::string real_str(double v) {
    // Trim trailing zeros so round-trips stay tidy.
    std::ostringstream out;
    out << v;
    return out.str();
}
}  // namespace

std::string serialize_gen(const Genome& genome) {
    std::ostringstream out;
    out << real_str(genome.initial_iteration) << ' ' << real_str(genome.base_duration) << ' '
        << real_str(genome.duration_step) << '\n';
    for (const Rule& rule : genome.rules) {
        out << real_str(rule.iterativity) << ' ' << real_str(rule.duration_factor) << ' '
            << rule.instrument_id << ' ' << rule.scale_id << ' ' << rule.tessitura_lo << ' '
            << rule.tessitura_hi << ' ' << to_text(rule.rhs) << '\n';
    }
    return out.str();
}

}  // namespace gram::atonal
