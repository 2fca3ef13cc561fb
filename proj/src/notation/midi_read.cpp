#include <fstream>

#include "gram/core/errors.h"
#include "gram/notation/midi.h"

namespace gram::notation {

namespace {

struct Cursor {
    const std::vector<std::uint8_t>* data;
    std::size_t pos = 0;

    std::uint8_t u8() {
        if (pos >= data->size()) throw ParseError("unexpected end of MIDI data");
        return (*data)[pos++];
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
        return v;
    }
    std::uint16_t u16() {
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v = static_cast<std::uint16_t>((v << 8) | u8());
        return v;
    }
    long vlq() {
        long v = 0;
        for (int i = 0; i < 5; ++i) {
            const std::uint8_t b = u8();
            v = (v << 7) | (b & 0x7f);
            if (!(b & 0x80)) return v;
        }
        throw ParseError("variable-length quantity too long");
    }
    void skip(std::size_t n) {
        if (pos + n > data->size()) throw ParseError("chunk overruns MIDI data");
        pos += n;
    }
};

struct OpenNote {
    long tick;
    int velocity;
};

}  // namespace

ParsedMidi parse_midi(const std::vector<std::uint8_t>& bytes) {
    Cursor c{&bytes};
    if (c.u8() != 'M' || c.u8() != 'T' || c.u8() != 'h' || c.u8() != 'd')
        throw ParseError("missing MThd chunk");
    const std::uint32_t header_len = c.u32();
    ParsedMidi out;
    out.format = c.u16();
    const int ntrks = c.u16();
    out.division = c.u16();
    if (out.division & 0x8000) throw ParseError("SMPTE division not supported");
    c.skip(header_len - 6);

    for (int track_index = 0; track_index < ntrks; ++track_index) {
        if (c.u8() != 'M' || c.u8() != 'T' || c.u8() != 'r' || c.u8() != 'k')
            throw ParseError("missing MTrk chunk");
        const std::uint32_t length = c.u32();
        const std::size_t track_end = c.pos + length;
        MidiTrack track;
        long tick = 0;
        std::uint8_t running = 0;
        // key -> FIFO of open notes, per channel
        std::vector<std::vector<OpenNote>> open(16 * 128);

        while (c.pos < track_end) {
            tick += c.vlq();
            std::uint8_t status = c.u8();
            if (status < 0x80) {
                if (running == 0) throw ParseError("dangling running status");
                --c.pos;
                status = running;
            }
            if (status == 0xff) {
                const std::uint8_t type = c.u8();
                const long len = c.vlq();
                if (type == 0x51 && len == 3) {
                    long usec = 0;
                    for (int i = 0; i < 3; ++i) usec = (usec << 8) | c.u8();
                    out.tempos.push_back({tick, usec});
                } else {
                    c.skip(static_cast<std::size_t>(len));
                }
                continue;
            }
            if (status == 0xf0 || status == 0xf7) {
                const long len = c.vlq();
                c.skip(static_cast<std::size_t>(len));
                continue;
            }
            running = status;
            const int kind = status >> 4;
            const int channel = status & 0x0f;
            switch (kind) {
                case 0x9: {  // note on (velocity 0 acts as note off)
                    const int key = c.u8() & 0x7f;
                    const int vel = c.u8() & 0x7f;
                    auto& fifo = open[static_cast<std::size_t>(channel * 128 + key)];
                    if (vel > 0) {
                        fifo.push_back({tick, vel});
                    } else if (!fifo.empty()) {
                        track.notes.push_back({fifo.front().tick, tick, key, fifo.front().velocity, channel});
                        fifo.erase(fifo.begin());
                    }
                    break;
                }
                case 0x8: {  // note off
                    const int key = c.u8() & 0x7f;
                    c.u8();  // release velocity
                    auto& fifo = open[static_cast<std::size_t>(channel * 128 + key)];
                    if (!fifo.empty()) {
                        track.notes.push_back({fifo.front().tick, tick, key, fifo.front().velocity, channel});
                        fifo.erase(fifo.begin());
                    }
                    break;
                }
                case 0xc: {  // program change
                    const int program = c.u8() & 0x7f;
                    if (track.program < 0) track.program = program;
                    break;
                }
                case 0xd: c.u8(); break;              // channel pressure
                case 0xa: case 0xb: case 0xe:
                    c.u8(); c.u8(); break;            // two data bytes
                default:
                    throw ParseError("unsupported status byte");
            }
        }
        out.tracks.push_back(std::move(track));
    }
    return out;
}

ParsedMidi parse_midi_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return parse_midi(bytes);
}

}  // namespace gram::notation
