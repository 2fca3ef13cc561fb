#include <algorithm>
#include <fstream>
#include <map>

#include "gram/core/errors.h"
#include "gram/notation/midi.h"

namespace gram::notation {

namespace {

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void push_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void push_vlq(std::vector<std::uint8_t>& out, long value) {
    if (value < 0) value = 0;
    std::uint8_t stack[5];
    int n = 0;
    do {
        stack[n++] = static_cast<std::uint8_t>(value & 0x7f);
        value >>= 7;
    } while (value > 0);
    while (n > 1) out.push_back(static_cast<std::uint8_t>(stack[--n] | 0x80));
    out.push_back(stack[0]);
}

struct RawEvent {
    long tick = 0;
    int order = 0;  // off(0) before on(1) at the same tick
    std::vector<std::uint8_t> bytes;
};

std::vector<std::uint8_t> finish_track(std::vector<RawEvent>& events, long end_tick) {
    std::stable_sort(events.begin(), events.end(), [](const RawEvent& a, const RawEvent& b) {
        return a.tick != b.tick ? a.tick < b.tick : a.order < b.order;
    });
    std::vector<std::uint8_t> data;
    long cursor = 0;
    for (const RawEvent& ev : events) {
        push_vlq(data, ev.tick - cursor);
        cursor = ev.tick;
        data.insert(data.end(), ev.bytes.begin(), ev.bytes.end());
    }
    push_vlq(data, std::max(0L, end_tick - cursor));
    data.insert(data.end(), {0xff, 0x2f, 0x00});

    std::vector<std::uint8_t> out = {'M', 'T', 'r', 'k'};
    push_u32(out, static_cast<std::uint32_t>(data.size()));
    out.insert(out.end(), data.begin(), data.end());
    return out;
}

int channel_for_track(const Composition& comp, std::size_t index) {
    if (comp.tracks[index].instrument_name == "drum kit") return 9;
    int channel = 0;
    for (std::size_t t = 0; t <= index; ++t) {
        if (t == index) break;
        if (comp.tracks[t].instrument_name == "drum kit") continue;
        ++channel;
        if (channel == 9) ++channel;  // reserved for percussion
    }
    return channel % 16;
}

}  // namespace

long beat_to_tick(const Rational& beat) {
    const Rational t = beat * Rational(kPulsesPerQuarter);
    // Round half up.
    const std::int64_t num = t.num(), den = t.den();
    return static_cast<long>((2 * num + den) / (2 * den));
}

std::vector<std::uint8_t> to_midi(const Composition& comp) {
    const long end_tick = beat_to_tick(comp.total_beats());

    // Conductor track: time signature plus the tempo map (last change at a
    // tick wins).
    std::map<long, double> tempo_at;
    tempo_at[0] = comp.initial_bpm;
    for (const auto& ev : comp.tempo) tempo_at[beat_to_tick(ev.beat)] = ev.bpm;
    std::vector<RawEvent> conductor;
    {
        RawEvent ts;
        ts.tick = 0;
        ts.order = 0;
        const auto beats = static_cast<std::uint8_t>(std::clamp(comp.beats_per_measure, 1, 16));
        ts.bytes = {0xff, 0x58, 0x04, beats, 0x02, 0x18, 0x08};
        conductor.push_back(ts);
    }
    for (const auto& [tick, bpm] : tempo_at) {
        const auto usec = static_cast<std::uint32_t>(60000000.0 / bpm + 0.5);
        RawEvent ev;
        ev.tick = tick;
        ev.order = 1;
        ev.bytes = {0xff, 0x51, 0x03, static_cast<std::uint8_t>(usec >> 16),
                    static_cast<std::uint8_t>(usec >> 8), static_cast<std::uint8_t>(usec)};
        conductor.push_back(ev);
    }

    std::vector<std::vector<std::uint8_t>> chunks;
    chunks.push_back(finish_track(conductor, end_tick));

    for (std::size_t t = 0; t < comp.tracks.size(); ++t) {
        const int channel = channel_for_track(comp, t);
        std::vector<RawEvent> events;
        {
            RawEvent prog;
            prog.tick = 0;
            prog.order = 0;
            prog.bytes = {static_cast<std::uint8_t>(0xc0 | channel),
                          static_cast<std::uint8_t>(comp.tracks[t].midi_program & 0x7f)};
            events.push_back(prog);
        }
        for (const Note& n : comp.notes[t]) {
            if (n.is_rest) continue;
            if (n.pitch < 0 || n.pitch > 127)
                throw PitchOutOfRange("pitch " + std::to_string(n.pitch) + " on track " +
                                      std::to_string(t));
            const long on = beat_to_tick(n.onset);
            long off = beat_to_tick(n.end());
            if (off <= on) off = on + 1;
            RawEvent ev_on;
            ev_on.tick = on;
            ev_on.order = 1;
            ev_on.bytes = {static_cast<std::uint8_t>(0x90 | channel),
                           static_cast<std::uint8_t>(n.pitch),
                           static_cast<std::uint8_t>(std::clamp(n.velocity, 1, 127))};
            events.push_back(ev_on);
            RawEvent ev_off;
            ev_off.tick = off;
            ev_off.order = 0;
            ev_off.bytes = {static_cast<std::uint8_t>(0x80 | channel),
                            static_cast<std::uint8_t>(n.pitch), 0x40};
            events.push_back(ev_off);
        }
        chunks.push_back(finish_track(events, end_tick));
    }

    std::vector<std::uint8_t> out = {'M', 'T', 'h', 'd'};
    push_u32(out, 6);
    push_u16(out, 1);  // format 1
    push_u16(out, static_cast<std::uint16_t>(chunks.size()));
    push_u16(out, kPulsesPerQuarter);
    for (const auto& chunk : chunks) out.insert(out.end(), chunk.begin(), chunk.end());
    return out;
}

void write_midi_file(const Composition& comp, const std::string& path) {
    const auto bytes = to_midi(comp);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace gram::notation
