// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "voxgauge/audio_io.hpp"
#include "voxgauge/scorer_bridge.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace voxgauge {

struct ManifestEntry {
    std::string clip_id;
    std::string audio_path;
    std::string transcript;
    std::string speaker_id;
    double duration_s = 0.0;
};

/// Ordered, validated list of clips. Immutable after load by convention.
struct Manifest {
    std::vector<ManifestEntry> entries;

    /// Speaker ids in order of first appearance.
    std::vector<std::string> speakers() const;
    std::vector<const ManifestEntry*> entries_for(std::string_view speaker_id) const;
    bool has_speaker(std::string_view speaker_id) const;
};

/// Reads a JSON-lines manifest. Relative audio paths resolve against the
/// manifest's directory; durations come from WAV headers.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir);

/// One JSON object per line with clip_id, audio_path, transcript, speaker_id.
void write_manifest(std::ostream& out, const Manifest& manifest);
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Lowercases, removes Unicode punctuation, splits on whitespace.
std::vector<std::string> tokenize_words(std::string_view transcript);

struct SpeakerDatasetStats {
    std::string speaker_id;
    std::size_t clip_count = 0;
    double total_hours = 0.0;
    double clip_len_mean_s = 0.0;
    double clip_len_std_s = 0.0;
    std::size_t unique_words = 0;
    std::size_t total_words = 0;
    double avg_words_per_clip = 0.0;
    double energy_mean_db = 0.0;
    double energy_std_db = 0.0;
    std::optional<double> mos_mean;
    std::optional<double> mos_std;
};

struct EnergyOptions {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    /// Worker threads for decoding and framing clips.
    int jobs = 1;
};

using ClipLoader = std::function<AudioClip(const ManifestEntry&)>;

/// Decodes entry.audio_path with load_wav.
AudioClip load_entry_audio(const ManifestEntry& entry);

/// Table-1 style statistics for one speaker. Energy statistics pool every
/// frame of every clip; MOS statistics are present iff `scores` is given and
/// carries dnsmos_ovrl for at least one of the speaker's clips.
SpeakerDatasetStats speaker_stats(const Manifest& manifest, std::string_view speaker_id,
                                  const ScoreSet* scores = nullptr, const EnergyOptions& options = {},
                                  const ClipLoader& loader = load_entry_audio);

enum class Outcome { PositiveExpected, Uncertain, CollapseRisk };

std::string_view to_string(Outcome outcome);

inline constexpr double kPositiveEnergyStdDb = 13.0;
inline constexpr double kCollapseEnergyStdDb = 10.0;

struct AdaptationForecast {
    Outcome outcome = Outcome::Uncertain;
    double energy_std_db = 0.0;
    std::string rationale;
};

/// >= 13 dB -> PositiveExpected, <= 10 dB -> CollapseRisk, else Uncertain.
AdaptationForecast classify_variability(double energy_std_db);
AdaptationForecast classify_variability(const SpeakerDatasetStats& stats);

struct DecodingParams {
    double temperature = 1.0;
    int top_k = 50;
    std::optional<std::string> advisory;
};

DecodingParams recommend_decoding(const AdaptationForecast& forecast);

struct HoursTarget {
    double hours = 0.0;
};

/// Exact rational share of a speaker's clips; selection takes
/// ceil(num * count / den) clips.
struct FractionTarget {
    std::int64_t num = 1;
    std::int64_t den = 1;
};

struct MixTarget {
    std::string speaker_id;
    std::variant<HoursTarget, FractionTarget> target;
};

struct MixSpec {
    std::vector<MixTarget> targets;
    /// When set, each speaker's clips are shuffled with this seed before the
    /// first-fit selection.
    std::optional<std::uint64_t> shuffle_seed;
};

/// Parses "SPK=2h", "SPK=1.5h", "SPK=2/9", "SPK=0.25" or "SPK=25%".
MixTarget parse_mix_target(std::string_view text);

/// Hours targets take clips in order until the cumulative duration first
/// reaches the target; fraction targets take the first ceil(f * n) clips.
/// Speakers are concatenated in spec order.
Manifest build_mix_manifest(std::span<const Manifest> manifests, const MixSpec& spec);

}  // namespace voxgauge
