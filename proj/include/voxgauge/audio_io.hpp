// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace voxgauge {

/// Mono waveform with samples normalized to [-1, 1].
///
/// `channels` records the channel count of the source before mixdown; the
/// samples themselves are always mono.
struct AudioClip {
    Eigen::ArrayXd samples;
    int sample_rate = 0;
    int channels = 1;
    std::string source_id;

    Eigen::Index frame_count() const noexcept { return samples.size(); }
    double duration_seconds() const noexcept {
        return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
    }
};

enum class WavEncoding { Pcm16, Pcm24, Pcm32, Float32 };

/// Header-level description of a WAV file, available without decoding.
struct WavInfo {
    int sample_rate = 0;
    int channels = 0;
    int bits_per_sample = 0;
    WavEncoding encoding = WavEncoding::Pcm16;
    std::int64_t frames = 0;

    double duration_seconds() const noexcept {
        return static_cast<double>(frames) / static_cast<double>(sample_rate);
    }
};

inline constexpr int kMinSampleRate = 8000;
inline constexpr int kMaxSampleRate = 48000;

/// Arithmetic mean across channels of a (frames x channels) array.
template <typename Derived>
Eigen::ArrayXd mixdown(const Eigen::ArrayBase<Derived>& frames) {
    if (frames.cols() == 1) return frames.col(0).template cast<double>();
    return frames.template cast<double>().rowwise().sum() / static_cast<double>(frames.cols());
}

WavInfo read_wav_info(const std::filesystem::path& path);
WavInfo parse_wav_info(std::span<const std::uint8_t> bytes);

AudioClip load_wav(const std::filesystem::path& path);
AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string source_id = {});

/// Decodes without mixdown; returns a (frames x channels) array.
Eigen::ArrayXXd decode_wav_frames(std::span<const std::uint8_t> bytes, WavInfo* info = nullptr);

/// Encodes a (frames x channels) array. Integer encodings round to nearest
/// and saturate; Float32 casts each sample to float.
std::vector<std::uint8_t> encode_wav(const Eigen::Ref<const Eigen::ArrayXXd>& frames, int sample_rate,
                                     WavEncoding encoding = WavEncoding::Float32);

void save_wav(const std::filesystem::path& path, const AudioClip& clip,
              WavEncoding encoding = WavEncoding::Float32);
void save_wav(const std::filesystem::path& path, const Eigen::Ref<const Eigen::ArrayXXd>& frames,
              int sample_rate, WavEncoding encoding = WavEncoding::Float32);

/// Joins two clips recorded at the same rate.
AudioClip concat(const AudioClip& a, const AudioClip& b);

}  // namespace voxgauge
