// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxgauge/output.hpp"

#include "voxgauge/errors.hpp"
#include "table.hpp"

namespace voxgauge {
namespace {

using ojson = nlohmann::ordered_json;
using detail::Cells;
using detail::fixed;

template <typename T>
std::string dump_all(std::span<const T> rows) {
    ojson arr = ojson::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

std::string size_str(std::size_t n) { return std::to_string(n); }

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "table-text" || name == "table") return Format::TableText;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw InvalidArgument("unknown format '" + std::string(name) + "' (expected json, csv or table-text)");
}

SpeakerAnalysis analyze_speaker(const Manifest& manifest, std::string_view speaker_id, const ScoreSet* scores,
                                const EnergyOptions& options) {
    SpeakerAnalysis a;
    a.stats = speaker_stats(manifest, speaker_id, scores, options);
    a.forecast = classify_variability(a.stats);
    a.decoding = recommend_decoding(a.forecast);
    return a;
}

nlohmann::ordered_json to_json(const ClipSnr& r) {
    return {{"path", r.path},
            {"snr_db", r.estimate.value_db},
            {"method", r.estimate.method},
            {"clamped", r.estimate.clamped}};
}

nlohmann::ordered_json to_json(const ClipEnergy& r) {
    return {{"path", r.path},
            {"frames", r.profile.frame_db.size()},
            {"frame_ms", r.profile.frame_ms},
            {"hop_ms", r.profile.hop_ms},
            {"mean_db", r.profile.mean_db},
            {"std_db", r.profile.std_db}};
}

nlohmann::ordered_json to_json(const SpeakerAnalysis& a) {
    const auto& s = a.stats;
    ojson j;
    j["speaker_id"] = s.speaker_id;
    j["clip_count"] = s.clip_count;
    j["total_hours"] = s.total_hours;
    j["clip_len_mean_s"] = s.clip_len_mean_s;
    j["clip_len_std_s"] = s.clip_len_std_s;
    j["unique_words"] = s.unique_words;
    j["total_words"] = s.total_words;
    j["avg_words_per_clip"] = s.avg_words_per_clip;
    j["energy_mean_db"] = s.energy_mean_db;
    j["energy_std_db"] = s.energy_std_db;
    j["mos_mean"] = s.mos_mean ? ojson(*s.mos_mean) : ojson(nullptr);
    j["mos_std"] = s.mos_std ? ojson(*s.mos_std) : ojson(nullptr);
    j["forecast"] = {{"outcome", to_string(a.forecast.outcome)},
                     {"energy_std_db", a.forecast.energy_std_db},
                     {"rationale", a.forecast.rationale}};
    j["decoding"] = {{"temperature", a.decoding.temperature},
                     {"top_k", a.decoding.top_k},
                     {"advisory", a.decoding.advisory ? ojson(*a.decoding.advisory) : ojson(nullptr)}};
    return j;
}

nlohmann::ordered_json to_json(const SelectionResult& s) {
    ojson j;
    j["divergence"] = s.divergence ? to_json(*s.divergence) : ojson(nullptr);
    j["ranking"] = to_json(std::span<const RankedCheckpoint>(s.ranking));
    return j;
}

std::string render(std::span<const ClipSnr> rows, Format format) {
    if (format == Format::Json) return dump_all(rows);
    std::vector<Cells> t{{"path", "snr_db", "method", "clamped"}};
    for (const auto& r : rows) {
        t.push_back({r.path, fixed(r.estimate.value_db, 2), r.estimate.method, r.estimate.clamped ? "true" : "false"});
    }
    return format == Format::Csv ? detail::csv(t) : detail::aligned(t);
}

std::string render(std::span<const ClipEnergy> rows, Format format) {
    if (format == Format::Json) return dump_all(rows);
    std::vector<Cells> t{{"path", "frames", "mean_db", "std_db"}};
    for (const auto& r : rows) {
        t.push_back({r.path, std::to_string(r.profile.frame_db.size()), fixed(r.profile.mean_db, 2),
                     fixed(r.profile.std_db, 2)});
    }
    return format == Format::Csv ? detail::csv(t) : detail::aligned(t);
}

std::string render(std::span<const SpeakerAnalysis> rows, Format format) {
    if (format == Format::Json) return dump_all(rows);
    std::vector<Cells> t{{"speaker_id", "clips", "hours", "clip_len_mean_s", "clip_len_std_s", "unique_words",
                          "words_per_clip", "energy_mean_db", "energy_std_db", "mos_mean", "mos_std", "outcome",
                          "temperature", "top_k"}};
    for (const auto& a : rows) {
        const auto& s = a.stats;
        t.push_back({s.speaker_id, size_str(s.clip_count), fixed(s.total_hours), fixed(s.clip_len_mean_s, 2),
                     fixed(s.clip_len_std_s, 2), size_str(s.unique_words), fixed(s.avg_words_per_clip, 2),
                     fixed(s.energy_mean_db, 2), fixed(s.energy_std_db, 2), fixed(s.mos_mean), fixed(s.mos_std),
                     std::string(to_string(a.forecast.outcome)), fixed(a.decoding.temperature, 1),
                     std::to_string(a.decoding.top_k)});
    }
    return format == Format::Csv ? detail::csv(t) : detail::aligned(t);
}

std::string render(const SelectionResult& s, Format format) {
    if (format == Format::Json) return to_json(s).dump(2) + "\n";
    std::string out;
    if (format == Format::TableText) {
        if (s.divergence) {
            const auto& d = *s.divergence;
            out += std::string("diverged: ") + (d.diverged ? "yes" : "no");
            if (d.window) {
                out += " (steps " + std::to_string(d.window->step_start) + " -> " +
                       std::to_string(d.window->step_end) + ", mos drop " + fixed(d.mos_drop) + ", loss drop " +
                       fixed(d.loss_drop) + ")";
            }
            out += "\n\n";
        } else {
            out += "diverged: n/a\n\n";
        }
    }
    std::vector<Cells> t{{"rank", "step", "score"}};
    for (std::size_t i = 0; i < s.ranking.size(); ++i) {
        t.push_back({std::to_string(i + 1), std::to_string(s.ranking[i].step), fixed(s.ranking[i].score, 4)});
    }
    return out + (format == Format::Csv ? detail::csv(t) : detail::aligned(t));
}

}  // namespace voxgauge
