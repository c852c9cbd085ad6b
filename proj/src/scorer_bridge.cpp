// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxgauge/scorer_bridge.hpp"

#include "voxgauge/stats.hpp"

#include <fstream>
#include <sstream>

namespace voxgauge {
namespace {

using nlohmann::json;

double finite_number(const json& rec, const char* key, std::size_t line) {
    const json& v = rec.at(key);
    if (!v.is_number()) throw SchemaError(line, key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(line, key, "not finite");
    return x;
}

ScoreRecord parse_record(const json& rec, std::size_t line) {
    if (!rec.is_object()) throw SchemaError(line, "<record>", "expected an object");
    if (!rec.contains("clip_id") || !rec["clip_id"].is_string()) throw SchemaError(line, "clip_id");

    ScoreRecord r;
    r.clip_id = rec["clip_id"].get<std::string>();
    if (r.clip_id.empty()) throw SchemaError(line, "clip_id", "empty");
    if (rec.contains("dnsmos_ovrl") && !rec["dnsmos_ovrl"].is_null()) {
        const double mos = finite_number(rec, "dnsmos_ovrl", line);
        if (mos < 1.0 || mos > 5.0) throw SchemaError(line, "dnsmos_ovrl", "outside [1, 5]");
        r.dnsmos_ovrl = mos;
    }
    if (rec.contains("snr_db") && !rec["snr_db"].is_null()) r.snr_db = finite_number(rec, "snr_db", line);
    if (rec.contains("embedding") && !rec["embedding"].is_null()) {
        const json& e = rec["embedding"];
        if (!e.is_array() || e.empty()) throw SchemaError(line, "embedding", "expected a non-empty array");
        Eigen::VectorXd v(static_cast<Eigen::Index>(e.size()));
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i].is_number() || !std::isfinite(e[i].get<double>())) {
                throw SchemaError(line, "embedding", "element " + std::to_string(i) + " is not a finite number");
            }
            v(static_cast<Eigen::Index>(i)) = e[i].get<double>();
        }
        r.embedding = std::move(v);
    }
    if (!r.dnsmos_ovrl && !r.snr_db && !r.embedding) {
        throw SchemaError(line, "<record>", "no score field besides clip_id");
    }
    return r;
}

}  // namespace

ScoreSet::ScoreSet(std::vector<ScoreRecord> records, std::vector<ScoreFailure> failures)
    : records_(std::move(records)), failures_(std::move(failures)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const ScoreRecord& r = records_[i];
        if (!index_.emplace(r.clip_id, i).second) throw DuplicateClipId("duplicate clip_id: " + r.clip_id);
        if (r.embedding) {
            if (!dim_) {
                dim_ = r.embedding->size();
            } else if (*dim_ != r.embedding->size()) {
                throw DimensionMismatch("clip " + r.clip_id + ": embedding length " +
                                        std::to_string(r.embedding->size()) + ", expected " + std::to_string(*dim_));
            }
        }
    }
    for (const auto& f : failures_) {
        if (index_.contains(f.clip_id)) throw DuplicateClipId("duplicate clip_id: " + f.clip_id);
    }
}

const ScoreRecord* ScoreSet::find(std::string_view clip_id) const {
    const auto it = index_.find(std::string(clip_id));
    return it == index_.end() ? nullptr : &records_[it->second];
}

ScoreSet parse_scores(const nlohmann::json& doc) {
    if (!doc.is_array()) throw SchemaError(0, "<document>", "score file must be a JSON array");
    std::vector<ScoreRecord> records;
    std::vector<ScoreFailure> failures;
    records.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& rec = doc[i];
        if (rec.is_object() && rec.contains("error") && !rec["error"].is_null()) {
            if (!rec["error"].is_string()) throw SchemaError(i + 1, "error", "expected a string");
            if (!rec.contains("clip_id") || !rec["clip_id"].is_string()) throw SchemaError(i + 1, "clip_id");
            failures.push_back({rec["clip_id"].get<std::string>(), rec["error"].get<std::string>()});
            continue;
        }
        records.push_back(parse_record(rec, i + 1));
    }
    return ScoreSet(std::move(records), std::move(failures));
}

ScoreSet parse_score_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(0, "<document>", e.what());
    }
    return parse_scores(doc);
}

ScoreSet load_scores(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open score file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_score_text(ss.str());
}

nlohmann::json to_json(const ScoreSet& scores) {
    json out = json::array();
    for (const auto& r : scores.records()) {
        json rec = {{"clip_id", r.clip_id}};
        if (r.dnsmos_ovrl) rec["dnsmos_ovrl"] = *r.dnsmos_ovrl;
        if (r.snr_db) rec["snr_db"] = *r.snr_db;
        if (r.embedding) rec["embedding"] = std::vector<double>(r.embedding->begin(), r.embedding->end());
        out.push_back(std::move(rec));
    }
    for (const auto& f : scores.failures()) out.push_back({{"clip_id", f.clip_id}, {"error", f.error}});
    return out;
}

AggregateMetrics aggregate(const ScoreSet& scores, const std::optional<Eigen::VectorXd>& reference,
                           MetricMask required) {
    if (scores.empty()) throw EmptySet("cannot aggregate an empty score set");

    std::vector<double> mos;
    std::vector<double> snr;
    std::vector<double> sim;
    for (const auto& r : scores.records()) {
        if (r.dnsmos_ovrl) mos.push_back(*r.dnsmos_ovrl);
        if (r.snr_db) snr.push_back(*r.snr_db);
        if (reference) {
            if (!r.embedding) throw MissingField("clip " + r.clip_id + " has no embedding for similarity");
            sim.push_back(similarity_01(*r.embedding, *reference));
        }
    }
    if (has(required, MetricMask::Mos) && mos.empty()) throw MissingField("no record carries dnsmos_ovrl");
    if (has(required, MetricMask::Snr) && snr.empty()) throw MissingField("no record carries snr_db");
    if (has(required, MetricMask::Similarity) && !reference) {
        throw MissingField("similarity requested without a reference embedding");
    }

    AggregateMetrics m;
    m.n = scores.size();
    if (!mos.empty()) {
        m.mos_mean = mean(mos);
        m.mos_std = sample_std(mos);
    }
    if (!snr.empty()) {
        m.snr_mean_db = mean(snr);
        m.snr_std_db = sample_std(snr);
    }
    if (!sim.empty()) m.similarity_mean = std::clamp(mean(sim), 0.0, 1.0);
    return m;
}

}  // namespace voxgauge
