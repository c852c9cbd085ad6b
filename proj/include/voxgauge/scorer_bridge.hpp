// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "voxgauge/errors.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace voxgauge {

/// One line of the score file written by the neural scoring sidecar.
struct ScoreRecord {
    std::string clip_id;
    std::optional<double> dnsmos_ovrl;
    std::optional<double> snr_db;
    std::optional<Eigen::VectorXd> embedding;
};

/// Per-clip failure reported by the sidecar in place of scores.
struct ScoreFailure {
    std::string clip_id;
    std::string error;
};

class ScoreSet {
public:
    ScoreSet() = default;

    /// Validates uniqueness of clip ids and embedding dimension.
    explicit ScoreSet(std::vector<ScoreRecord> records, std::vector<ScoreFailure> failures = {});

    const std::vector<ScoreRecord>& records() const noexcept { return records_; }
    const std::vector<ScoreFailure>& failures() const noexcept { return failures_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    std::optional<Eigen::Index> embedding_dim() const noexcept { return dim_; }

    const ScoreRecord* find(std::string_view clip_id) const;

private:
    std::vector<ScoreRecord> records_;
    std::vector<ScoreFailure> failures_;
    std::unordered_map<std::string, std::size_t> index_;
    std::optional<Eigen::Index> dim_;
};

/// Score file: a JSON array of records. Each record carries clip_id and at
/// least one of dnsmos_ovrl (1..5), snr_db, embedding, or an `error` string
/// for a clip the sidecar failed on. Unknown keys are ignored.
ScoreSet parse_scores(const nlohmann::json& doc);
ScoreSet parse_score_text(std::string_view text);
ScoreSet load_scores(const std::filesystem::path& path);

nlohmann::json to_json(const ScoreSet& scores);

/// Cosine similarity mapped onto [0, 1] by (cos + 1) / 2.
template <typename A, typename B>
double similarity_01(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("embedding dimensions differ: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
    }
    const double na = a.template cast<double>().norm();
    const double nb = b.template cast<double>().norm();
    if (!(na > 0.0) || !(nb > 0.0)) throw ZeroVector("similarity of a zero embedding");
    const double cos = a.template cast<double>().dot(b.template cast<double>()) / (na * nb);
    return std::clamp((cos + 1.0) / 2.0, 0.0, 1.0);
}

enum class MetricMask : unsigned { None = 0, Mos = 1, Snr = 2, Similarity = 4 };

constexpr MetricMask operator|(MetricMask a, MetricMask b) {
    return static_cast<MetricMask>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has(MetricMask set, MetricMask m) {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(m)) != 0;
}

/// Means and sample standard deviations over the records carrying each
/// field. Absent fields stay empty, never zero-filled.
struct AggregateMetrics {
    std::size_t n = 0;
    std::optional<double> mos_mean;
    std::optional<double> mos_std;
    std::optional<double> snr_mean_db;
    std::optional<double> snr_std_db;
    std::optional<double> similarity_mean;
};

/// Throws EmptySet for an empty set and MissingField when a metric in
/// `required` has no carriers. With a reference embedding every record
/// must carry an embedding.
AggregateMetrics aggregate(const ScoreSet& scores, const std::optional<Eigen::VectorXd>& reference = std::nullopt,
                           MetricMask required = MetricMask::None);

}  // namespace voxgauge
