#include "gram/notation/musicxml.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gram/core/errors.h"
#include "gram/notation/midi.h"

namespace gram::notation {

namespace {

constexpr int kDivisions = 480;  // per quarter note

const char* kStepNames[12] = {"C", "C", "D", "D", "E", "F", "F", "G", "G", "A", "A", "B"};
const int kAlter[12] = {0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0};

const char* kDynamicNames[8] = {"ppp", "pp", "p", "mp", "mf", "f", "ff", "fff"};

long duration_divisions(const Rational& beats) {
    const Rational t = beats * Rational(kDivisions);
    if (t.den() != 1)
        throw UnrepresentableDuration("duration " + beats.str() + " is off the lattice");
    return static_cast<long>(t.num());
}

std::string note_type(long divisions) {
    switch (divisions) {
        case 1920: return "whole";
        case 960: return "half";
        case 480: return "quarter";
        case 240: return "eighth";
        case 120: return "16th";
        case 60: return "32nd";
        case 30: return "64th";
        default: return "";  // dotted and irregular values omit <type>
    }
}

void emit_pitch(std::ostringstream& out, int pitch) {
    const int pc = pitch % 12;
    const int octave = pitch / 12 - 1;
    out << "        <pitch>\n"
        << "          <step>" << kStepNames[pc] << "</step>\n";
    if (kAlter[pc]) out << "          <alter>1</alter>\n";
    out << "          <octave>" << octave << "</octave>\n"
        << "        </pitch>\n";
}

void emit_note(std::ostringstream& out, const Note* note, long divisions, bool chord_member) {
    out << "      <note>\n";
    if (chord_member) out << "        <chord/>\n";
    if (note == nullptr || note->is_rest) {
        out << "        <rest/>\n";
    } else {
        emit_pitch(out, note->pitch);
    }
    out << "        <duration>" << divisions << "</duration>\n";
    if (const std::string type = note_type(divisions); !type.empty())
        out << "        <type>" << type << "</type>\n";
    if (note && !note->is_rest) {
        std::string artics;
        if (note->articulations & kStaccato) artics += "            <staccato/>\n";
        if (note->articulations & kTenuto) artics += "            <tenuto/>\n";
        if (note->articulations & kAccento) artics += "            <accent/>\n";
        if (!artics.empty())
            out << "        <notations>\n          <articulations>\n" << artics
                << "          </articulations>\n        </notations>\n";
    }
    out << "      </note>\n";
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string to_musicxml(const Composition& comp) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!DOCTYPE score-partwise PUBLIC \"-//Recordare//DTD MusicXML 3.1 Partwise//EN\" "
           "\"http://www.musicxml.org/dtds/partwise.dtd\">\n"
        << "<score-partwise version=\"3.1\">\n"
        << "  <work><work-title>" << escape(comp.meta.name.empty() ? "untitled" : comp.meta.name)
        << "</work-title></work>\n"
        << "  <part-list>\n";

    std::vector<std::size_t> parts;
    for (std::size_t t = 0; t < comp.tracks.size(); ++t)
        if (!comp.tracks[t].is_rest_track) parts.push_back(t);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out << "    <score-part id=\"P" << i + 1 << "\">\n"
            << "      <part-name>" << escape(comp.tracks[parts[i]].instrument_name)
            << "</part-name>\n"
            << "    </score-part>\n";
    }
    out << "  </part-list>\n";

    const int beats = std::max(1, comp.beats_per_measure);
    const long measure_div = static_cast<long>(beats) * kDivisions;
    const long total_div = std::max<long>(beat_to_tick(comp.total_beats()), 1);
    const long measure_count = (total_div + measure_div - 1) / measure_div;

    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& notes = comp.notes[parts[i]];
        out << "  <part id=\"P" << i + 1 << "\">\n";
        std::size_t cursor_note = 0;
        long cursor = 0;
        int last_dynamic = 0;
        for (long m = 0; m < std::max<long>(measure_count, 1); ++m) {
            const long measure_end = (m + 1) * measure_div;
            out << "    <measure number=\"" << m + 1 << "\">\n";
            if (m == 0) {
                out << "      <attributes>\n"
                    << "        <divisions>" << kDivisions << "</divisions>\n"
                    << "        <time><beats>" << beats << "</beats><beat-type>4</beat-type></time>\n"
                    << "      </attributes>\n";
            }
            while (cursor < measure_end) {
                // Fill the gap to the next note (or the measure end) with rests.
                const Note* next = cursor_note < notes.size() ? &notes[cursor_note] : nullptr;
                const long next_on = next ? duration_divisions(next->onset) : total_div;
                if (next == nullptr || next_on >= measure_end) {
                    const long gap = measure_end - cursor;
                    if (gap > 0) emit_note(out, nullptr, gap, false);
                    cursor = measure_end;
                    break;
                }
                if (next_on > cursor) {
                    emit_note(out, nullptr, next_on - cursor, false);
                    cursor = next_on;
                    continue;
                }
                // Emit every note starting here; simultaneous ones chord up.
                const long start = cursor;
                long span = 0;
                bool first = true;
                while (cursor_note < notes.size() &&
                       duration_divisions(notes[cursor_note].onset) == start) {
                    const Note& n = notes[cursor_note];
                    long len = duration_divisions(n.duration);
                    if (start + len > measure_end) len = measure_end - start;  // clip at barline
                    if (len <= 0) len = 1;
                    if (!n.is_rest && n.dynamic != last_dynamic && first) {
                        out << "      <direction placement=\"below\"><direction-type><dynamics><"
                            << kDynamicNames[std::clamp(n.dynamic, 1, 8) - 1]
                            << "/></dynamics></direction-type></direction>\n";
                        last_dynamic = n.dynamic;
                    }
                    emit_note(out, &n, len, !first);
                    span = std::max(span, len);
                    first = false;
                    ++cursor_note;
                }
                cursor = start + std::max(span, 1L);
            }
            out << "    </measure>\n";
        }
        out << "  </part>\n";
    }
    out << "</score-partwise>\n";
    return out.str();
}

void write_musicxml_file(const Composition& comp, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << to_musicxml(comp);
}

}  // namespace gram::notation
