// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxgauge/audio_io.hpp"

#include "voxgauge/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>

namespace voxgauge {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

bool tag_is(const std::uint8_t* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

struct ParsedWav {
    WavInfo info;
    std::size_t data_offset = 0;
    std::size_t data_size = 0;
};

struct NeedMoreBytes {};

// Chunk bounds are checked against `total` (the real file length); only
// `bytes`, a prefix of the file, must be held in memory. Throws NeedMoreBytes
// when the prefix ends before the data chunk header.
ParsedWav parse(std::span<const std::uint8_t> bytes, std::uint64_t total) {
    if (total < 12) throw CorruptHeader("file too short for a RIFF header");
    if (bytes.size() < 12) throw NeedMoreBytes{};
    if (!tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
        throw UnsupportedFormat("not a RIFF/WAVE file");
    }
    const std::uint64_t riff_size = read_u32(bytes.data() + 4);
    if (riff_size + 8 > total) {
        throw CorruptHeader("RIFF size " + std::to_string(riff_size) + " exceeds file length " +
                            std::to_string(total));
    }
    const std::uint64_t end = riff_size + 8;

    std::optional<ParsedWav> out;
    bool have_fmt = false;
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;

    std::uint64_t pos = 12;
    while (pos + 8 <= end) {
        if (pos + 8 > bytes.size()) throw NeedMoreBytes{};
        const std::uint8_t* chunk = bytes.data() + pos;
        const std::uint64_t size = read_u32(chunk + 4);
        const std::uint64_t body = pos + 8;
        if (body + size > end) {
            throw CorruptHeader("chunk '" + std::string(reinterpret_cast<const char*>(chunk), 4) +
                                "' extends past end of file");
        }
        if (tag_is(chunk, "fmt ")) {
            if (size < 16) throw CorruptHeader("fmt chunk shorter than 16 bytes");
            if (body + size > bytes.size()) throw NeedMoreBytes{};
            const std::uint8_t* f = bytes.data() + body;
            format = read_u16(f);
            channels = read_u16(f + 2);
            rate = read_u32(f + 4);
            block_align = read_u16(f + 12);
            bits = read_u16(f + 14);
            if (format == kFormatExtensible) {
                if (size < 40) throw CorruptHeader("extensible fmt chunk shorter than 40 bytes");
                // First two bytes of the subformat GUID carry the plain format code.
                format = read_u16(f + 24);
            }
            have_fmt = true;
        } else if (tag_is(chunk, "data")) {
            if (!have_fmt) throw CorruptHeader("data chunk precedes fmt chunk");
            out.emplace();
            out->data_offset = static_cast<std::size_t>(body);
            out->data_size = static_cast<std::size_t>(size);
            break;
        }
        pos = body + size + (size & 1U);
    }
    if (!have_fmt) throw CorruptHeader("missing fmt chunk");
    if (!out) throw CorruptHeader("missing data chunk");

    WavInfo& info = out->info;
    if (format == kFormatPcm) {
        switch (bits) {
            case 16: info.encoding = WavEncoding::Pcm16; break;
            case 24: info.encoding = WavEncoding::Pcm24; break;
            case 32: info.encoding = WavEncoding::Pcm32; break;
            default: throw UnsupportedFormat("unsupported PCM bit depth " + std::to_string(bits));
        }
    } else if (format == kFormatFloat) {
        if (bits != 32) throw UnsupportedFormat("unsupported float bit depth " + std::to_string(bits));
        info.encoding = WavEncoding::Float32;
    } else {
        throw UnsupportedFormat("unsupported format code " + std::to_string(format));
    }
    if (channels < 1 || channels > 2) {
        throw UnsupportedFormat("unsupported channel count " + std::to_string(channels));
    }
    if (rate < static_cast<std::uint32_t>(kMinSampleRate) || rate > static_cast<std::uint32_t>(kMaxSampleRate)) {
        throw UnsupportedFormat("sample rate " + std::to_string(rate) + " Hz outside [8000, 48000]");
    }
    const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
    if (block_align != frame_bytes) throw CorruptHeader("block align inconsistent with format");
    if (out->data_size % frame_bytes != 0) {
        throw CorruptHeader("data size is not a whole number of sample frames");
    }
    info.sample_rate = static_cast<int>(rate);
    info.channels = channels;
    info.bits_per_sample = bits;
    info.frames = static_cast<std::int64_t>(out->data_size / frame_bytes);
    return *out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path, std::size_t limit = SIZE_MAX) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path)) throw FileNotFound("no such file: " + path.string());
        throw FileNotFound("cannot open: " + path.string());
    }
    std::vector<std::uint8_t> bytes;
    if (limit == SIZE_MAX) {
        bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        bytes.resize(limit);
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(limit));
        bytes.resize(static_cast<std::size_t>(in.gcount()));
    }
    return bytes;
}

double decode_sample(const std::uint8_t* p, WavEncoding enc) {
    switch (enc) {
        case WavEncoding::Pcm16:
            return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
        case WavEncoding::Pcm24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) v -= 0x1000000;
            return v / 8388608.0;
        }
        case WavEncoding::Pcm32:
            return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
        case WavEncoding::Float32: {
            const float f = std::bit_cast<float>(read_u32(p));
            if (!std::isfinite(f)) throw UnsupportedFormat("non-finite float sample");
            return std::clamp(static_cast<double>(f), -1.0, 1.0);
        }
    }
    return 0.0;
}

int bytes_per_sample(WavEncoding enc) {
    switch (enc) {
        case WavEncoding::Pcm16: return 2;
        case WavEncoding::Pcm24: return 3;
        case WavEncoding::Pcm32:
        case WavEncoding::Float32: return 4;
    }
    return 0;
}

void encode_sample(std::vector<std::uint8_t>& out, double x, WavEncoding enc) {
    auto quantize = [x](double full_scale, double lo, double hi) {
        return static_cast<std::int64_t>(std::clamp(std::nearbyint(x * full_scale), lo, hi));
    };
    switch (enc) {
        case WavEncoding::Pcm16:
            put_u16(out, static_cast<std::uint16_t>(quantize(32768.0, -32768.0, 32767.0)));
            break;
        case WavEncoding::Pcm24: {
            const auto v = static_cast<std::uint32_t>(quantize(8388608.0, -8388608.0, 8388607.0));
            out.push_back(static_cast<std::uint8_t>(v & 0xFF));
            out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
            out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
            break;
        }
        case WavEncoding::Pcm32:
            put_u32(out, static_cast<std::uint32_t>(quantize(2147483648.0, -2147483648.0, 2147483647.0)));
            break;
        case WavEncoding::Float32:
            put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
            break;
    }
}

}  // namespace

WavInfo parse_wav_info(std::span<const std::uint8_t> bytes) { return parse(bytes, bytes.size()).info; }

WavInfo read_wav_info(const std::filesystem::path& path) {
    std::error_code ec;
    const std::uintmax_t total = std::filesystem::file_size(path, ec);
    if (ec) throw FileNotFound("no such file: " + path.string());
    // Headers normally fit in the first few KiB; metadata chunks can push the
    // data chunk further out, in which case read everything.
    const auto head = read_file(path, 64 * 1024);
    try {
        return parse(head, total).info;
    } catch (const NeedMoreBytes&) {
        const auto all = read_file(path);
        return parse(all, all.size()).info;
    }
}

Eigen::ArrayXXd decode_wav_frames(std::span<const std::uint8_t> bytes, WavInfo* info_out) {
    const ParsedWav wav = [&] {
        try {
            return parse(bytes, bytes.size());
        } catch (const NeedMoreBytes&) {
            throw CorruptHeader("truncated chunk header");
        }
    }();
    const WavInfo& info = wav.info;
    const int width = bytes_per_sample(info.encoding);
    Eigen::ArrayXXd frames(info.frames, info.channels);
    const std::uint8_t* p = bytes.data() + wav.data_offset;
    for (Eigen::Index i = 0; i < frames.rows(); ++i) {
        for (Eigen::Index c = 0; c < frames.cols(); ++c) {
            frames(i, c) = decode_sample(p, info.encoding);
            p += width;
        }
    }
    if (info_out) *info_out = info;
    return frames;
}

AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string source_id) {
    WavInfo info;
    const Eigen::ArrayXXd frames = decode_wav_frames(bytes, &info);
    AudioClip clip;
    clip.samples = mixdown(frames);
    clip.sample_rate = info.sample_rate;
    clip.channels = info.channels;
    clip.source_id = std::move(source_id);
    return clip;
}

AudioClip load_wav(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return decode_wav(bytes, path.string());
}

std::vector<std::uint8_t> encode_wav(const Eigen::Ref<const Eigen::ArrayXXd>& frames, int sample_rate,
                                     WavEncoding encoding) {
    const auto channels = static_cast<std::uint16_t>(frames.cols());
    const int width = bytes_per_sample(encoding);
    const std::uint64_t data_size = static_cast<std::uint64_t>(frames.rows()) * channels * width;
    if (data_size + 36 > UINT32_MAX) throw InvalidArgument("clip too large for a RIFF file");

    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(44 + data_size));
    put_tag(out, "RIFF");
    put_u32(out, static_cast<std::uint32_t>(36 + data_size));
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, encoding == WavEncoding::Float32 ? kFormatFloat : kFormatPcm);
    put_u16(out, channels);
    put_u32(out, static_cast<std::uint32_t>(sample_rate));
    put_u32(out, static_cast<std::uint32_t>(sample_rate * channels * width));
    put_u16(out, static_cast<std::uint16_t>(channels * width));
    put_u16(out, static_cast<std::uint16_t>(8 * width));
    put_tag(out, "data");
    put_u32(out, static_cast<std::uint32_t>(data_size));
    for (Eigen::Index i = 0; i < frames.rows(); ++i) {
        for (Eigen::Index c = 0; c < frames.cols(); ++c) encode_sample(out, frames(i, c), encoding);
    }
    return out;
}

void save_wav(const std::filesystem::path& path, const Eigen::Ref<const Eigen::ArrayXXd>& frames,
              int sample_rate, WavEncoding encoding) {
    const auto bytes = encode_wav(frames, sample_rate, encoding);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InvalidArgument("short write to " + path.string());
}

void save_wav(const std::filesystem::path& path, const AudioClip& clip, WavEncoding encoding) {
    save_wav(path, Eigen::ArrayXXd(clip.samples), clip.sample_rate, encoding);
}

AudioClip concat(const AudioClip& a, const AudioClip& b) {
    if (a.sample_rate != b.sample_rate) throw InvalidArgument("cannot concatenate clips at different rates");
    AudioClip out;
    out.sample_rate = a.sample_rate;
    out.channels = 1;
    out.source_id = a.source_id + "+" + b.source_id;
    out.samples.resize(a.samples.size() + b.samples.size());
    out.samples << a.samples, b.samples;
    return out;
}

}  // namespace voxgauge
