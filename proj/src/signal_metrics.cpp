// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxgauge/signal_metrics.hpp"

#include "voxgauge/errors.hpp"
#include "voxgauge/stats.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace voxgauge {

// Generated from data/wada_table.txt at configure time.
extern const char kBuiltinWadaTable[];

namespace {

double parse_double(std::string_view token, std::size_t line) {
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw TableError("line " + std::to_string(line) + ": not a number: '" + std::string(token) + "'");
    }
    return v;
}

}  // namespace

WadaTable::WadaTable(std::vector<double> snr_db, std::vector<double> beta)
    : snr_db_(std::move(snr_db)), beta_(std::move(beta)) {
    if (snr_db_.size() != beta_.size()) throw TableError("column lengths differ");
    if (snr_db_.size() < 2) throw TableError("table needs at least two rows");
    for (std::size_t i = 1; i < beta_.size(); ++i) {
        if (!(snr_db_[i] > snr_db_[i - 1])) throw TableError("snr_db column is not strictly increasing");
        if (!(beta_[i] > beta_[i - 1])) {
            throw TableError("beta column is not strictly increasing at snr " + std::to_string(snr_db_[i]));
        }
    }
}

WadaTable WadaTable::parse(std::string_view text) {
    std::vector<double> snr;
    std::vector<double> beta;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') throw TableError("CRLF line endings are not accepted");
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') continue;
        line.remove_prefix(first);

        std::string_view cols[2];
        int n = 0;
        while (!line.empty()) {
            const auto stop = line.find_first_of(" \t");
            if (n == 2) throw TableError("line " + std::to_string(line_no) + ": expected two columns");
            cols[n++] = line.substr(0, stop);
            if (stop == std::string_view::npos) break;
            line.remove_prefix(stop);
            line.remove_prefix(std::min(line.size(), line.find_first_not_of(" \t")));
        }
        if (n != 2) throw TableError("line " + std::to_string(line_no) + ": expected two columns");
        snr.push_back(parse_double(cols[0], line_no));
        beta.push_back(parse_double(cols[1], line_no));
    }
    return WadaTable(std::move(snr), std::move(beta));
}

WadaTable WadaTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open WADA table: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const WadaTable& WadaTable::builtin() {
    static const WadaTable table = parse(kBuiltinWadaTable);
    return table;
}

WadaTable::Lookup WadaTable::lookup(double beta) const {
    if (!(beta > beta_.front())) return {snr_db_.front(), true};
    if (!(beta < beta_.back())) return {snr_db_.back(), true};
    const auto hi = static_cast<std::size_t>(std::upper_bound(beta_.begin(), beta_.end(), beta) - beta_.begin());
    const std::size_t lo = hi - 1;
    const double t = (beta - beta_[lo]) / (beta_[hi] - beta_[lo]);
    return {snr_db_[lo] + t * (snr_db_[hi] - snr_db_[lo]), false};
}

std::string WadaTable::to_text() const {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < beta_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", snr_db_[i], beta_[i]);
        out += buf;
    }
    return out;
}

const WadaTable& default_wada_table() {
    static const WadaTable table = [] {
        if (const char* path = std::getenv("VOXGAUGE_TABLE_PATH"); path && *path) {
            return WadaTable::load(path);
        }
        return WadaTable::builtin();
    }();
    return table;
}

SnrEstimate wada_snr(const AudioClip& clip, const WadaTable& table) {
    if (clip.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
    if (clip.duration_seconds() < kWadaMinSeconds) {
        throw DegenerateSignal(clip.source_id + ": shorter than 0.1 s");
    }
    const double beta = wada_beta(clip.samples);
    if (std::isnan(beta)) throw DegenerateSignal(clip.source_id + ": all samples are zero");
    const auto hit = table.lookup(beta);
    return {hit.snr_db, "wada", hit.clamped};
}

Framing framing_for(int sample_rate, double frame_ms, double hop_ms) {
    if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
    if (!(frame_ms > 0.0) || !(hop_ms > 0.0) || hop_ms > frame_ms) {
        throw InvalidArgument("framing requires 0 < hop_ms <= frame_ms");
    }
    const auto to_samples = [sample_rate](double ms) {
        return static_cast<Eigen::Index>(std::llround(ms * sample_rate / 1000.0));
    };
    const Framing f{to_samples(frame_ms), to_samples(hop_ms)};
    if (f.frame_len < 1 || f.hop_len < 1) throw InvalidArgument("frame or hop shorter than one sample");
    return f;
}

Eigen::Index frame_count(Eigen::Index n, const Framing& framing) {
    if (n < framing.frame_len) return 0;
    return (n - framing.frame_len) / framing.hop_len + 1;
}

EnergyProfile energy_profile(const AudioClip& clip, double frame_ms, double hop_ms) {
    const Framing framing = framing_for(clip.sample_rate, frame_ms, hop_ms);
    if (clip.samples.size() < framing.frame_len) {
        throw ClipTooShort(clip.source_id + ": shorter than one " + std::to_string(frame_ms) + " ms frame");
    }
    EnergyProfile p;
    p.frame_ms = frame_ms;
    p.hop_ms = hop_ms;
    p.frame_db = frame_levels_db(clip.samples, framing);
    p.mean_db = mean(p.frame_db);
    p.std_db = sample_std(p.frame_db);
    return p;
}

}  // namespace voxgauge
