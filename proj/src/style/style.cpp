#include "gram/style/style.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "gram/core/errors.h"
#include "gram/core/instruments.h"
#include "gram/core/scale.h"

namespace gram::style {

using nlohmann::json;

const std::vector<std::string>& role_family_names() {
    static const std::vector<std::string> names = {
        "melody", "homophony", "counterpoint", "chords", "bass", "pads",
        "arpeggios", "ostinati", "drums", "percussion", "fx",
    };
    return names;
}

void StyleSpec::validate() const {
    if (structure.size() != 3)
        throw SchemaError("structure needs the three levels periods/phrases/ideas");
    for (const auto& level : structure) {
        if (level.children.empty() || level.distinct.empty())
            throw SchemaError("structure options must not be empty");
        for (int v : level.children)
            if (v < 1) throw SchemaError("child counts must be positive");
        for (int v : level.distinct)
            if (v < 1) throw SchemaError("distinct counts must be positive");
    }
    if (tempo_options.empty()) throw SchemaError("at least one tempo option is required");
    if (dynamic_options.empty()) throw SchemaError("at least one dynamic option is required");
    for (int d : dynamic_options)
        if (d < 0 || d > 7) throw SchemaError("dynamics are coded 0..7");
    if (roles.empty()) throw SchemaError("at least one role is required");
    for (const auto& role : roles) {
        if (role.instruments.empty())
            throw SchemaError(role_family_names()[static_cast<std::size_t>(
                                  std::clamp(role.role, 0, 10))] +
                              ": no instruments");
        double sum = 0.0;
        for (const auto& choice : role.instruments) sum += choice.probability;
        if (std::abs(sum - 1.0) > 1e-9)
            throw ConsistencyError("instrument probabilities must sum to 1 (got " +
                                   std::to_string(sum) + ")");
        if (!role.patterns.empty()) {
            double psum = 0.0;
            for (const auto& p : role.patterns) psum += p.probability;
            if (std::abs(psum - 1.0) > 1e-9)
                throw ConsistencyError("rhythmic pattern probabilities must sum to 1");
        }
    }
    if (scales.empty()) throw SchemaError("at least one scale is required");
    if (chords.empty()) throw SchemaError("at least one chord is required");
    for (const auto& progression : progressions)
        for (const auto& step : progression)
            if (step.chord < 0 || step.chord >= static_cast<int>(chords.size()))
                throw ConsistencyError("progression references chord " +
                                       std::to_string(step.chord) + " outside the chord list");
    if (rhythmic_modes.empty()) throw SchemaError("at least one rhythmic mode is required");
    for (const auto& mode : rhythmic_modes)
        if (static_cast<int>(mode.accents.size()) != mode.beats_per_measure)
            throw ConsistencyError("accent vector length must equal the measure's beat count");
}

interpret::HarmonyTables StyleSpec::harmony_tables() const {
    interpret::HarmonyTables tables;
    tables.chords.clear();
    for (const auto& chord : chords) tables.chords.push_back({chord.name, chord.intervals});
    return tables;
}

namespace {

Rational rational_field(const json& v) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) {
        const double d = v.get<double>();
        return Rational(static_cast<std::int64_t>(d * 1000.0 + (d >= 0 ? 0.5 : -0.5)), 1000);
    }
    throw SchemaError("expected a number for a duration field");
}

json rational_out(const Rational& r) {
    if (r.den() == 1) return json(r.num());
    return json(r.to_double());
}

int role_id_from(const json& v) {
    if (v.is_number_integer()) return v.get<int>();
    const std::string name = v.get<std::string>();
    const auto& names = role_family_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw SchemaError("unknown role \"" + name + "\"");
}

}  // namespace

StyleSpec load_style(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("style document is not valid JSON: ") + e.what());
    }
    StyleSpec out;
    try {
        out.name = doc.value("name", "unnamed");
        for (const auto& level : doc.at("structure")) {
            StructureOptions options;
            options.children = level.at("children").get<std::vector<int>>();
            options.distinct = level.at("distinct").get<std::vector<int>>();
            out.structure.push_back(options);
        }
        if (doc.contains("durationSeconds")) {
            out.duration_total_lo = doc["durationSeconds"].at(0).get<double>();
            out.duration_total_hi = doc["durationSeconds"].at(1).get<double>();
        }
        if (doc.contains("periodDurationSeconds")) {
            out.duration_period_lo = doc["periodDurationSeconds"].at(0).get<double>();
            out.duration_period_hi = doc["periodDurationSeconds"].at(1).get<double>();
        }
        out.tempo_options = doc.at("tempo").get<std::vector<double>>();
        out.dynamic_options = doc.at("dynamics").get<std::vector<int>>();
        for (const auto& role : doc.at("roles")) {
            RoleSpec spec;
            spec.role = role_id_from(role.at("role"));
            for (const auto& ins : role.at("instruments")) {
                InstrumentChoice choice;
                choice.instrument_id = ins.at("id").get<int>();
                choice.probability = ins.at("p").get<double>();
                if (ins.contains("tessitura")) {
                    choice.tessitura_lo = ins["tessitura"].at(0).get<int>();
                    choice.tessitura_hi = ins["tessitura"].at(1).get<int>();
                }
                if (ins.contains("sweetSpot")) {
                    choice.sweet_lo = ins["sweetSpot"].at(0).get<int>();
                    choice.sweet_hi = ins["sweetSpot"].at(1).get<int>();
                }
                spec.instruments.push_back(choice);
            }
            if (role.contains("patterns")) {
                for (const auto& p : role["patterns"]) {
                    RhythmPattern pattern;
                    for (const auto& d : p.at("durations")) pattern.durations.push_back(rational_field(d));
                    pattern.probability = p.at("p").get<double>();
                    spec.patterns.push_back(pattern);
                }
            }
            spec.copy_harmony_from_bass = role.value("copyHarmonyFromBass", false);
            if (role.contains("copyRhythmFromRole"))
                spec.copy_rhythm_from = role_id_from(role["copyRhythmFromRole"]);
            out.roles.push_back(spec);
        }
        if (doc.contains("arpeggio")) {
            const auto& a = doc["arpeggio"];
            out.arpeggio.contour = a.value("contour", "up");
            if (a.contains("segmentDurations"))
                for (const auto& d : a["segmentDurations"])
                    out.arpeggio.segment_durations.push_back(rational_field(d));
            out.arpeggio.octave_scope = a.value("octaveScope", 1);
            out.arpeggio.tie_notes = a.value("tieNotes", false);
        }
        if (doc.contains("rhythmicIncompatibilities"))
            for (const auto& pair : doc["rhythmicIncompatibilities"])
                out.rhythmic_incompatibilities.emplace_back(pair.at(0).get<int>(),
                                                            pair.at(1).get<int>());
        for (const auto& s : doc.at("scales"))
            out.scales.push_back({s.at("mode").get<int>(), s.at("key").get<int>()});
        for (const auto& c : doc.at("chords"))
            out.chords.push_back({c.at("name").get<std::string>(),
                                  c.at("intervals").get<std::vector<int>>()});
        if (doc.contains("validRoots")) out.valid_roots = doc["validRoots"].get<std::vector<int>>();
        if (doc.contains("progressions"))
            for (const auto& prog : doc["progressions"]) {
                std::vector<ProgressionStep> steps;
                for (const auto& step : prog)
                    steps.push_back({step.at("root").get<int>(), step.at("chord").get<int>()});
                out.progressions.push_back(steps);
            }
        if (doc.contains("dissonanceRules"))
            for (const auto& rule : doc["dissonanceRules"]) {
                DissonanceRule r;
                for (const auto& v : rule.at("rolesA")) r.roles_a.push_back(role_id_from(v));
                for (const auto& v : rule.at("rolesB")) r.roles_b.push_back(role_id_from(v));
                r.intervals = rule.at("intervals").get<std::vector<int>>();
                out.dissonance_rules.push_back(r);
            }
        for (const auto& mode : doc.at("rhythmicModes"))
            out.rhythmic_modes.push_back({mode.at("beats").get<int>(),
                                          mode.at("accents").get<std::vector<int>>()});
        if (doc.contains("melodicIntervals"))
            for (const auto& mi : doc["melodicIntervals"])
                out.melodic_intervals.emplace_back(mi.at("step").get<int>(),
                                                   mi.at("weight").get<double>());
        if (doc.contains("textureRules"))
            for (const auto& rule : doc["textureRules"]) {
                TextureRule r;
                const std::string kind = rule.at("kind").get<std::string>();
                if (kind == "mandatory") r.kind = TextureRule::Kind::Mandatory;
                else if (kind == "forbidden") r.kind = TextureRule::Kind::Forbidden;
                else if (kind == "density") r.kind = TextureRule::Kind::Density;
                else throw SchemaError("unknown texture rule kind \"" + kind + "\"");
                r.role = role_id_from(rule.at("role"));
                r.period_type = rule.value("periodType", 0);
                r.density = rule.value("density", 1.0);
                r.tolerance = rule.value("tolerance", 0.0);
                out.texture_rules.push_back(r);
            }
        if (doc.contains("roleRules"))
            for (const auto& rule : doc["roleRules"]) {
                RoleRule r;
                const std::string kind = rule.at("kind").get<std::string>();
                if (kind == "neverTogether") r.kind = RoleRule::Kind::NeverTogether;
                else if (kind == "onlyWith") r.kind = RoleRule::Kind::OnlyWith;
                else if (kind == "neverStartTogether") r.kind = RoleRule::Kind::NeverStartTogether;
                else if (kind == "requiresBefore") r.kind = RoleRule::Kind::RequiresBefore;
                else throw SchemaError("unknown role rule kind \"" + kind + "\"");
                r.role_a = role_id_from(rule.at("roleA"));
                r.role_b = role_id_from(rule.at("roleB"));
                out.role_rules.push_back(r);
            }
        if (doc.contains("alterationIntensity"))
            out.alteration_intensity = doc["alterationIntensity"].get<std::vector<int>>();
        if (doc.contains("specialPeriods"))
            for (const auto& sp : doc["specialPeriods"]) {
                SpecialPeriod p;
                p.name = sp.at("name").get<std::string>();
                const std::string where = sp.value("placement", "afterFirst");
                if (where == "afterFirst") p.placement = SpecialPeriod::Placement::AfterFirst;
                else if (where == "afterSecond") p.placement = SpecialPeriod::Placement::AfterSecond;
                else if (where == "neverLast") p.placement = SpecialPeriod::Placement::NeverLast;
                else throw SchemaError("unknown special period placement \"" + where + "\"");
                out.special_periods.push_back(p);
            }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("style document: ") + e.what());
    }
    if (out.alteration_intensity.empty()) out.alteration_intensity = {2, 1, 0};
    out.validate();
    return out;
}

StyleSpec load_style_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_style(buf.str());
}

std::string save_style(const StyleSpec& style) {
    json doc;
    doc["name"] = style.name;
    doc["structure"] = json::array();
    for (const auto& level : style.structure)
        doc["structure"].push_back({{"children", level.children}, {"distinct", level.distinct}});
    doc["durationSeconds"] = {style.duration_total_lo, style.duration_total_hi};
    if (style.duration_period_lo && style.duration_period_hi)
        doc["periodDurationSeconds"] = {*style.duration_period_lo, *style.duration_period_hi};
    doc["tempo"] = style.tempo_options;
    doc["dynamics"] = style.dynamic_options;
    doc["roles"] = json::array();
    for (const auto& role : style.roles) {
        json r;
        r["role"] = role_family_names()[static_cast<std::size_t>(std::clamp(role.role, 0, 10))];
        r["instruments"] = json::array();
        for (const auto& ins : role.instruments) {
            json i = {{"id", ins.instrument_id}, {"p", ins.probability}};
            if (ins.tessitura_lo && ins.tessitura_hi)
                i["tessitura"] = {*ins.tessitura_lo, *ins.tessitura_hi};
            if (ins.sweet_lo && ins.sweet_hi) i["sweetSpot"] = {*ins.sweet_lo, *ins.sweet_hi};
            r["instruments"].push_back(i);
        }
        if (!role.patterns.empty()) {
            r["patterns"] = json::array();
            for (const auto& p : role.patterns) {
                json durations = json::array();
                for (const auto& d : p.durations) durations.push_back(rational_out(d));
                r["patterns"].push_back({{"durations", durations}, {"p", p.probability}});
            }
        }
        if (role.copy_harmony_from_bass) r["copyHarmonyFromBass"] = true;
        doc["roles"].push_back(r);
    }
    doc["scales"] = json::array();
    for (const auto& s : style.scales) doc["scales"].push_back({{"mode", s.mode_id}, {"key", s.key_pc}});
    doc["chords"] = json::array();
    for (const auto& c : style.chords)
        doc["chords"].push_back({{"name", c.name}, {"intervals", c.intervals}});
    doc["validRoots"] = style.valid_roots;
    doc["progressions"] = json::array();
    for (const auto& prog : style.progressions) {
        json steps = json::array();
        for (const auto& step : prog) steps.push_back({{"root", step.root_degree}, {"chord", step.chord}});
        doc["progressions"].push_back(steps);
    }
    doc["rhythmicModes"] = json::array();
    for (const auto& mode : style.rhythmic_modes)
        doc["rhythmicModes"].push_back({{"beats", mode.beats_per_measure}, {"accents", mode.accents}});
    if (!style.melodic_intervals.empty()) {
        doc["melodicIntervals"] = json::array();
        for (const auto& [step, weight] : style.melodic_intervals)
            doc["melodicIntervals"].push_back({{"step", step}, {"weight", weight}});
    }
    doc["alterationIntensity"] = style.alteration_intensity;
    return doc.dump(2) + "\n";
}

std::string style_hash(const StyleSpec& style) {
    const std::string text = save_style(style);
    // FNV-1a, enough for manifest provenance.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

}  // namespace gram::style
