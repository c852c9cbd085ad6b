// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "voxgauge/audio_io.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace voxgauge {

inline constexpr double kWadaMagnitudeFloor = 1e-10;
inline constexpr double kWadaMinSeconds = 0.1;
inline constexpr double kSilenceFloorDb = -120.0;
inline constexpr double kRmsFloor = 1e-6;

/// Log-amplitude statistic ln(E|x|) - E[ln|x|] over the nonzero samples.
/// Scale-invariant: a gain g adds ln(g) to both terms.
///
/// Zero samples are skipped; the remaining magnitudes are floored at
/// kWadaMagnitudeFloor before the log. Returns NaN when every sample is zero.
template <typename Derived>
double wada_beta(const Eigen::ArrayBase<Derived>& x) {
    double abs_sum = 0.0;
    double log_sum = 0.0;
    Eigen::Index n = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double a = std::abs(static_cast<double>(x.derived().coeff(i)));
        if (a == 0.0) continue;
        abs_sum += a;
        log_sum += std::log(std::max(a, kWadaMagnitudeFloor));
        ++n;
    }
    if (n == 0) return std::nan("");
    const double inv_n = 1.0 / static_cast<double>(n);
    return std::log(abs_sum * inv_n) - log_sum * inv_n;
}

/// Monotone beta -> SNR mapping for Gamma(0.4) speech in Gaussian noise.
///
/// Rows are (snr_db, beta) on a uniform SNR grid; beta must be strictly
/// increasing. Lookups interpolate linearly and clamp at both ends.
class WadaTable {
public:
    struct Lookup {
        double snr_db;
        bool clamped;
    };

    WadaTable(std::vector<double> snr_db, std::vector<double> beta);

    /// Parses the two-column text format. Lines starting with '#' and blank
    /// lines are ignored.
    static WadaTable parse(std::string_view text);
    static WadaTable load(const std::filesystem::path& path);

    /// Table compiled into the library.
    static const WadaTable& builtin();

    Lookup lookup(double beta) const;

    const std::vector<double>& snr_db() const noexcept { return snr_db_; }
    const std::vector<double>& beta() const noexcept { return beta_; }
    double min_snr_db() const noexcept { return snr_db_.front(); }
    double max_snr_db() const noexcept { return snr_db_.back(); }

    std::string to_text() const;

private:
    std::vector<double> snr_db_;
    std::vector<double> beta_;
};

/// Table used when none is passed explicitly: the file named by
/// VOXGAUGE_TABLE_PATH if set, else the builtin table. Resolved once.
const WadaTable& default_wada_table();

struct SnrEstimate {
    double value_db = 0.0;
    std::string method = "wada";
    bool clamped = false;
};

/// Blind SNR of a clip. Throws DegenerateSignal for all-zero clips and clips
/// shorter than 0.1 s.
SnrEstimate wada_snr(const AudioClip& clip, const WadaTable& table = default_wada_table());

struct EnergyProfile {
    Eigen::ArrayXd frame_db;
    double mean_db = 0.0;
    double std_db = 0.0;
    double frame_ms = 25.0;
    double hop_ms = 10.0;
};

struct Framing {
    Eigen::Index frame_len;
    Eigen::Index hop_len;
};

/// Converts millisecond framing to sample counts at `sample_rate`.
Framing framing_for(int sample_rate, double frame_ms, double hop_ms);

/// floor((n - frame_len) / hop_len) + 1 for n >= frame_len, else 0.
Eigen::Index frame_count(Eigen::Index n, const Framing& framing);

/// Per-frame RMS level in dBFS, floored at -120 dB. Trailing partial frames
/// are dropped.
template <typename Derived>
Eigen::ArrayXd frame_levels_db(const Eigen::ArrayBase<Derived>& x, const Framing& framing) {
    const Eigen::Index frames = frame_count(x.size(), framing);
    Eigen::ArrayXd out(frames);
    for (Eigen::Index f = 0; f < frames; ++f) {
        const auto seg = x.segment(f * framing.hop_len, framing.frame_len).template cast<double>();
        const double rms = std::sqrt(seg.square().mean());
        out(f) = 20.0 * std::log10(std::max(rms, kRmsFloor));
    }
    return out;
}

/// Throws ClipTooShort when the clip is shorter than one frame and
/// InvalidArgument unless 0 < hop_ms <= frame_ms.
EnergyProfile energy_profile(const AudioClip& clip, double frame_ms = 25.0, double hop_ms = 10.0);

}  // namespace voxgauge
