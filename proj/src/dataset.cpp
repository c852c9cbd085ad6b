// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxgauge/dataset.hpp"

#include "voxgauge/errors.hpp"
#include "voxgauge/signal_metrics.hpp"
#include "voxgauge/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace voxgauge {

using nlohmann::json;

std::vector<std::string> Manifest::speakers() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
        if (seen.insert(e.speaker_id).second) out.push_back(e.speaker_id);
    }
    return out;
}

std::vector<const ManifestEntry*> Manifest::entries_for(std::string_view speaker_id) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries) {
        if (e.speaker_id == speaker_id) out.push_back(&e);
    }
    return out;
}

bool Manifest::has_speaker(std::string_view speaker_id) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const ManifestEntry& e) { return e.speaker_id == speaker_id; });
}

Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
    static constexpr const char* kFields[] = {"clip_id", "audio_path", "transcript", "speaker_id"};

    Manifest manifest;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(line_no, "<line>", e.what());
        }
        if (!rec.is_object()) throw SchemaError(line_no, "<line>", "expected a JSON object");
        for (const char* field : kFields) {
            if (!rec.contains(field) || !rec[field].is_string()) throw SchemaError(line_no, field);
        }

        ManifestEntry e;
        e.clip_id = rec["clip_id"].get<std::string>();
        e.transcript = rec["transcript"].get<std::string>();
        e.speaker_id = rec["speaker_id"].get<std::string>();
        if (e.clip_id.empty()) throw SchemaError(line_no, "clip_id", "empty");
        if (e.speaker_id.empty()) throw SchemaError(line_no, "speaker_id", "empty");
        if (!ids.insert(e.clip_id).second) {
            throw DuplicateClipId("duplicate clip_id '" + e.clip_id + "' at line " + std::to_string(line_no));
        }

        std::filesystem::path audio = rec["audio_path"].get<std::string>();
        if (audio.empty()) throw SchemaError(line_no, "audio_path", "empty");
        if (audio.is_relative() && !base_dir.empty()) audio = base_dir / audio;
        audio = audio.lexically_normal();
        if (!std::filesystem::is_regular_file(audio)) {
            throw MissingAudio("line " + std::to_string(line_no) + ": missing audio " + audio.string());
        }
        e.audio_path = audio.string();
        e.duration_s = read_wav_info(audio).duration_seconds();
        if (!(e.duration_s > 0.0)) throw SchemaError(line_no, "audio_path", "audio has zero duration");
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open manifest: " + path.string());
    return parse_manifest(in, path.parent_path());
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
    for (const auto& e : manifest.entries) {
        nlohmann::ordered_json rec;
        rec["clip_id"] = e.clip_id;
        rec["audio_path"] = e.audio_path;
        rec["transcript"] = e.transcript;
        rec["speaker_id"] = e.speaker_id;
        out << rec.dump() << '\n';
    }
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write manifest: " + path.string());
    write_manifest(out, manifest);
}

AudioClip load_entry_audio(const ManifestEntry& entry) {
    AudioClip clip = load_wav(entry.audio_path);
    clip.source_id = entry.clip_id;
    return clip;
}

namespace {

// Frame levels of every clip, in input order. Workers pull clip indices
// from a shared counter; results land in per-clip slots so completion
// order never affects the output.
std::vector<Eigen::ArrayXd> clip_frame_levels(const std::vector<const ManifestEntry*>& clips,
                                              const EnergyOptions& options, const ClipLoader& loader) {
    std::vector<Eigen::ArrayXd> levels(clips.size());
    std::vector<std::exception_ptr> errors(clips.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < clips.size(); i = next++) {
            try {
                const AudioClip clip = loader(*clips[i]);
                levels[i] = energy_profile(clip, options.frame_ms, options.hop_ms).frame_db;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const int jobs = std::clamp(options.jobs, 1, 64);
    if (jobs == 1 || clips.size() < 2) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return levels;
}

}  // namespace

SpeakerDatasetStats speaker_stats(const Manifest& manifest, std::string_view speaker_id, const ScoreSet* scores,
                                  const EnergyOptions& options, const ClipLoader& loader) {
    const auto clips = manifest.entries_for(speaker_id);
    if (clips.empty()) throw UnknownSpeaker("speaker not in manifest: " + std::string(speaker_id));

    SpeakerDatasetStats s;
    s.speaker_id = std::string(speaker_id);
    s.clip_count = clips.size();

    Eigen::ArrayXd durations(static_cast<Eigen::Index>(clips.size()));
    std::set<std::string> vocabulary;
    for (std::size_t i = 0; i < clips.size(); ++i) {
        durations(static_cast<Eigen::Index>(i)) = clips[i]->duration_s;
        for (auto& w : tokenize_words(clips[i]->transcript)) {
            ++s.total_words;
            vocabulary.insert(std::move(w));
        }
    }
    s.total_hours = durations.sum() / 3600.0;
    s.clip_len_mean_s = mean(durations);
    s.clip_len_std_s = sample_std(durations);
    s.unique_words = vocabulary.size();
    s.avg_words_per_clip = static_cast<double>(s.total_words) / static_cast<double>(clips.size());

    const auto levels = clip_frame_levels(clips, options, loader);
    Eigen::Index pooled_size = 0;
    for (const auto& l : levels) pooled_size += l.size();
    Eigen::ArrayXd pooled(pooled_size);
    Eigen::Index at = 0;
    for (const auto& l : levels) {
        pooled.segment(at, l.size()) = l;
        at += l.size();
    }
    s.energy_mean_db = mean(pooled);
    s.energy_std_db = sample_std(pooled);

    if (scores) {
        std::vector<double> mos;
        for (const auto* c : clips) {
            if (const ScoreRecord* r = scores->find(c->clip_id); r && r->dnsmos_ovrl) mos.push_back(*r->dnsmos_ovrl);
        }
        if (!mos.empty()) {
            s.mos_mean = mean(mos);
            s.mos_std = sample_std(mos);
        }
    }
    return s;
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::PositiveExpected: return "PositiveExpected";
        case Outcome::Uncertain: return "Uncertain";
        case Outcome::CollapseRisk: return "CollapseRisk";
    }
    return "Uncertain";
}

AdaptationForecast classify_variability(double energy_std_db) {
    AdaptationForecast f;
    f.energy_std_db = energy_std_db;
    char buf[256];
    if (energy_std_db >= kPositiveEnergyStdDb) {
        f.outcome = Outcome::PositiveExpected;
        std::snprintf(buf, sizeof buf,
                      "energy std %.2f dB >= %.1f dB: training data is acoustically varied; fine-tuning is "
                      "expected to improve perceptual quality",
                      energy_std_db, kPositiveEnergyStdDb);
    } else if (energy_std_db <= kCollapseEnergyStdDb) {
        f.outcome = Outcome::CollapseRisk;
        std::snprintf(buf, sizeof buf,
                      "energy std %.2f dB <= %.1f dB: training data is acoustically homogeneous; fine-tuning "
                      "risks perceptual collapse",
                      energy_std_db, kCollapseEnergyStdDb);
    } else {
        f.outcome = Outcome::Uncertain;
        std::snprintf(buf, sizeof buf,
                      "energy std %.2f dB lies between %.1f and %.1f dB: outcome not predictable from energy "
                      "variability alone",
                      energy_std_db, kCollapseEnergyStdDb, kPositiveEnergyStdDb);
    }
    f.rationale = buf;
    return f;
}

AdaptationForecast classify_variability(const SpeakerDatasetStats& stats) {
    return classify_variability(stats.energy_std_db);
}

DecodingParams recommend_decoding(const AdaptationForecast& forecast) {
    switch (forecast.outcome) {
        case Outcome::CollapseRisk:
            return {0.8, 40, std::nullopt};
        case Outcome::PositiveExpected:
            return {1.0, 50, std::nullopt};
        case Outcome::Uncertain:
            break;
    }
    return {1.0, 50,
            "run a perceptual A/B at T=1.0/top_k=50 and T=0.8/top_k=40; constrained sampling helps "
            "low-variability speakers and can cost expressiveness on varied ones"};
}

MixTarget parse_mix_target(std::string_view text) {
    const auto eq = text.rfind('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
        throw InvalidArgument("mix target must look like SPEAKER=2h, SPEAKER=2/9 or SPEAKER=0.25: " +
                              std::string(text));
    }
    MixTarget t;
    t.speaker_id = std::string(text.substr(0, eq));
    std::string_view value = text.substr(eq + 1);
    const auto bad = [&] { return InvalidArgument("bad mix target value: " + std::string(value)); };

    auto parse_double = [&](std::string_view s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) throw bad();
        return v;
    };
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) throw bad();
        return v;
    };

    if (value.back() == 'h') {
        t.target = HoursTarget{parse_double(value.substr(0, value.size() - 1))};
    } else if (const auto slash = value.find('/'); slash != std::string_view::npos) {
        t.target = FractionTarget{parse_int(value.substr(0, slash)), parse_int(value.substr(slash + 1))};
    } else {
        bool percent = false;
        if (value.back() == '%') {
            percent = true;
            value.remove_suffix(1);
        }
        // Exact decimal -> rational: "0.25" becomes 25/100.
        const auto dot = value.find('.');
        std::string digits(value);
        std::int64_t den = percent ? 100 : 1;
        if (dot != std::string_view::npos) {
            const std::size_t decimals = value.size() - dot - 1;
            if (decimals > 12) throw bad();
            digits.erase(dot, 1);
            for (std::size_t k = 0; k < decimals; ++k) den *= 10;
        }
        if (digits.empty()) throw bad();
        t.target = FractionTarget{parse_int(digits), den};
    }

    if (const auto* h = std::get_if<HoursTarget>(&t.target); h && !(h->hours > 0.0 && std::isfinite(h->hours))) {
        throw InvalidArgument("hours target must be positive: " + std::string(text));
    }
    if (const auto* f = std::get_if<FractionTarget>(&t.target); f && (f->num <= 0 || f->den <= 0 || f->num > f->den)) {
        throw InvalidArgument("fraction target must lie in (0, 1]: " + std::string(text));
    }
    return t;
}

Manifest build_mix_manifest(std::span<const Manifest> manifests, const MixSpec& spec) {
    // Merge inputs, keeping file order within and across manifests.
    std::vector<const ManifestEntry*> all;
    std::unordered_set<std::string> ids;
    for (const auto& m : manifests) {
        for (const auto& e : m.entries) {
            if (!ids.insert(e.clip_id).second) throw DuplicateClipId("clip_id in several inputs: " + e.clip_id);
            all.push_back(&e);
        }
    }

    Manifest out;
    std::unordered_set<std::string> seen_speakers;
    for (const auto& target : spec.targets) {
        if (!seen_speakers.insert(target.speaker_id).second) {
            throw InvalidArgument("speaker listed twice in mix spec: " + target.speaker_id);
        }
        std::vector<const ManifestEntry*> pool;
        for (const auto* e : all) {
            if (e->speaker_id == target.speaker_id) pool.push_back(e);
        }
        if (pool.empty()) throw UnknownSpeaker("speaker not in any input manifest: " + target.speaker_id);
        if (spec.shuffle_seed) {
            // Spelled out instead of std::shuffle so a seed means the same
            // order under every standard library. Modulo bias is < 2^-40.
            std::mt19937_64 rng(*spec.shuffle_seed);
            for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng() % i]);
        }

        std::size_t take = 0;
        if (const auto* h = std::get_if<HoursTarget>(&target.target)) {
            if (!(h->hours > 0.0)) throw InvalidArgument("hours target must be positive");
            const double goal_s = h->hours * 3600.0;
            double total_s = 0.0;
            while (take < pool.size() && total_s < goal_s) total_s += pool[take++]->duration_s;
        } else {
            const auto& f = std::get<FractionTarget>(target.target);
            if (f.num <= 0 || f.den <= 0 || f.num > f.den) throw InvalidArgument("fraction must lie in (0, 1]");
            const auto n = static_cast<std::int64_t>(pool.size());
            take = static_cast<std::size_t>((f.num * n + f.den - 1) / f.den);
        }
        for (std::size_t i = 0; i < take; ++i) out.entries.push_back(*pool[i]);
    }
    if (out.entries.empty()) throw EmptyResult("mix selected no clips");
    return out;
}

}  // namespace voxgauge
