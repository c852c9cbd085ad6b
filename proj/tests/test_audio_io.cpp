// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_util.hpp"
#include "voxgauge/audio_io.hpp"
#include "voxgauge/errors.hpp"

#include <doctest.h>

#include <cstring>
#include <sstream>

using namespace voxgauge;
using voxgauge::testing::data_path;
using voxgauge::testing::read_bytes;
using voxgauge::testing::TempDir;

namespace {

// Little RIFF builder for malformed-header cases.
std::vector<std::uint8_t> riff(std::uint16_t format, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                               std::uint32_t data_bytes, std::int64_t riff_size_adjust = 0) {
    std::vector<std::uint8_t> out;
    auto u16 = [&](std::uint16_t v) {
        out.push_back(v & 0xFF);
        out.push_back(v >> 8);
    };
    auto u32 = [&](std::uint32_t v) {
        for (int k = 0; k < 4; ++k) out.push_back((v >> (8 * k)) & 0xFF);
    };
    auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
    const std::uint16_t align = static_cast<std::uint16_t>(channels * bits / 8);
    tag("RIFF");
    u32(static_cast<std::uint32_t>(36 + data_bytes + riff_size_adjust));
    tag("WAVE");
    tag("fmt ");
    u32(16);
    u16(format);
    u16(channels);
    u32(rate);
    u32(rate * align);
    u16(align);
    u16(bits);
    tag("data");
    u32(data_bytes);
    out.resize(out.size() + data_bytes, 0);
    return out;
}

}  // namespace

TEST_SUITE("audio_io") {
    TEST_CASE("16-bit mono header arithmetic") {
        const auto clip = load_wav(data_path("mono_24k.wav"));
        CHECK(clip.sample_rate == 24000);
        CHECK(clip.frame_count() == 24000);
        CHECK(clip.duration_seconds() == 1.0);
        CHECK(clip.channels == 1);

        const auto info = read_wav_info(data_path("mono_24k.wav"));
        CHECK(info.frames == 24000);
        CHECK(info.bits_per_sample == 16);
        CHECK(info.encoding == WavEncoding::Pcm16);
    }

    TEST_CASE("mu-law is rejected") {
        CHECK_THROWS_AS(load_wav(data_path("ulaw_8k.wav")), UnsupportedFormat);
        CHECK_THROWS_AS(read_wav_info(data_path("ulaw_8k.wav")), UnsupportedFormat);
    }

    TEST_CASE("balanced stereo mixes down to silence") {
        const auto clip = load_wav(data_path("balanced_stereo.wav"));
        CHECK(clip.channels == 2);
        CHECK(clip.sample_rate == 22050);
        CHECK(clip.samples.size() == 2205);
        CHECK((clip.samples == 0.0).all());
    }

    TEST_CASE("stereo decode matches the stdlib reference decoder sample for sample") {
        const auto clip = load_wav(data_path("stereo_16k.wav"));
        std::istringstream ref(voxgauge::testing::read_text(data_path("stereo_16k.ref.txt")));
        std::vector<double> expected;
        for (double v; ref >> v;) expected.push_back(v);
        REQUIRE(expected.size() == static_cast<std::size_t>(clip.samples.size()));
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            mismatches += clip.samples(static_cast<Eigen::Index>(i)) != expected[i];
        }
        CHECK(mismatches == 0);
    }

    TEST_CASE("missing file") {
        CHECK_THROWS_AS(load_wav("/nonexistent/clip.wav"), FileNotFound);
        CHECK_THROWS_AS(read_wav_info("/nonexistent/clip.wav"), FileNotFound);
    }

    TEST_CASE("header validation") {
        CHECK_NOTHROW(decode_wav(riff(1, 1, 16000, 16, 64)));
        CHECK_THROWS_AS(decode_wav(riff(1, 3, 16000, 16, 60)), UnsupportedFormat);
        CHECK_THROWS_AS(decode_wav(riff(1, 1, 16000, 8, 64)), UnsupportedFormat);
        CHECK_THROWS_AS(decode_wav(riff(1, 1, 96000, 16, 64)), UnsupportedFormat);
        CHECK_THROWS_AS(decode_wav(riff(1, 1, 4000, 16, 64)), UnsupportedFormat);
        CHECK_THROWS_AS(decode_wav(riff(3, 1, 16000, 16, 64)), UnsupportedFormat);
        CHECK_THROWS_AS(decode_wav(riff(1, 1, 16000, 16, 64, +100)), CorruptHeader);
        CHECK_THROWS_AS(decode_wav(riff(1, 1, 16000, 16, 63)), CorruptHeader);

        auto truncated = riff(1, 1, 16000, 16, 64);
        truncated.resize(truncated.size() - 10);
        CHECK_THROWS_AS(decode_wav(truncated), CorruptHeader);

        auto not_riff = riff(1, 1, 16000, 16, 64);
        std::memcpy(not_riff.data(), "RIFX", 4);
        CHECK_THROWS_AS(decode_wav(not_riff), UnsupportedFormat);

        CHECK_THROWS_AS(decode_wav(std::vector<std::uint8_t>(5, 0)), CorruptHeader);
    }

    TEST_CASE("integer PCM normalizes by 2^(bits-1)") {
        Eigen::ArrayXXd frames(3, 1);
        frames << -1.0, 0.5, 32767.0 / 32768.0;
        for (auto enc : {WavEncoding::Pcm16, WavEncoding::Pcm24, WavEncoding::Pcm32}) {
            const auto clip = decode_wav(encode_wav(frames, 16000, enc));
            CHECK(clip.samples(0) == -1.0);
            CHECK(clip.samples(1) == 0.5);
            CHECK(clip.samples(2) == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
        }
        // Saturation on the positive side.
        Eigen::ArrayXXd loud(1, 1);
        loud << 1.0;
        CHECK(decode_wav(encode_wav(loud, 16000, WavEncoding::Pcm16)).samples(0) == 32767.0 / 32768.0);
    }

    TEST_CASE("float32 round trip is bit exact") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<float> u(-1.0f, 1.0f);
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 3000);
            const Eigen::Index ch = 1 + static_cast<Eigen::Index>(rng() % 2);
            Eigen::ArrayXXd frames(n, ch);
            for (Eigen::Index i = 0; i < frames.size(); ++i) frames(i) = u(rng);
            Eigen::ArrayXXd back = decode_wav_frames(encode_wav(frames, 44100, WavEncoding::Float32));
            REQUIRE(back.rows() == n);
            REQUIRE(back.cols() == ch);
            CHECK((back == frames).all());
        }

        TempDir dir;
        AudioClip clip;
        clip.samples = Eigen::ArrayXd::LinSpaced(1000, -0.75, 0.75).cast<float>().cast<double>();
        clip.sample_rate = 8000;
        save_wav(dir / "x.wav", clip);
        const auto loaded = load_wav(dir / "x.wav");
        CHECK((loaded.samples == clip.samples).all());
        CHECK(loaded.sample_rate == 8000);
    }

    TEST_CASE("mixdown is linear") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        Eigen::ArrayXXd a(500, 2);
        Eigen::ArrayXXd b(500, 2);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a(i) = u(rng);
            b(i) = u(rng);
        }
        const Eigen::ArrayXd lhs = mixdown(a + b);
        const Eigen::ArrayXd rhs = mixdown(a) + mixdown(b);
        for (Eigen::Index i = 0; i < lhs.size(); ++i) {
            const double scale = std::abs(a(i, 0)) + std::abs(a(i, 1)) + std::abs(b(i, 0)) + std::abs(b(i, 1));
            CHECK(std::abs(lhs(i) - rhs(i)) <= 4.0 * std::numeric_limits<double>::epsilon() * scale);
        }
    }

    TEST_CASE("concatenation adds durations exactly") {
        AudioClip a;
        a.samples = Eigen::ArrayXd::Zero(12345);
        a.sample_rate = 16000;
        AudioClip b;
        b.samples = Eigen::ArrayXd::Constant(6789, 0.25);
        b.sample_rate = 16000;
        const auto c = concat(a, b);
        CHECK(c.frame_count() == 12345 + 6789);
        CHECK(c.duration_seconds() == static_cast<double>(12345 + 6789) / 16000.0);
        CHECK(c.samples(12345) == 0.25);

        b.sample_rate = 22050;
        CHECK_THROWS_AS(concat(a, b), InvalidArgument);
    }
}
