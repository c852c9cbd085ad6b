// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voxgauge {

struct CheckpointPoint {
    std::int64_t step = 0;
    std::optional<double> train_loss;
    std::optional<double> val_loss;
    std::optional<double> mos;
    std::optional<double> similarity_01;
    std::optional<double> snr_db;
    std::string label;  // free text, e.g. "5 epochs"
};

struct TrainingRunMeta {
    int adapter_rank = 0;
    double adapter_alpha = 0.0;
    int batch_size = 0;
    double epochs = 0.0;
};

struct CheckpointSeries {
    std::optional<TrainingRunMeta> meta;
    std::vector<CheckpointPoint> points;
};

inline constexpr double kDefaultMosDropThreshold = 0.2;

struct StepWindow {
    std::int64_t step_start = 0;
    std::int64_t step_end = 0;
};

struct DivergenceFinding {
    bool diverged = false;
    // Window with the largest MOS drop among those where val_loss is
    // non-increasing and strictly lower at the end. Empty when no such
    // window loses MOS at all.
    std::optional<StepWindow> window;
    double mos_drop = 0.0;
    double loss_drop = 0.0;
};

/// Only points carrying both val_loss and mos take part. Ties on the drop go
/// to the earliest end step, then the earliest start step. Throws
/// InsufficientData with fewer than two usable points and InvalidArgument for
/// a non-positive threshold or steps that are not strictly increasing.
DivergenceFinding detect_divergence(std::span<const CheckpointPoint> series,
                                    double mos_drop_threshold = kDefaultMosDropThreshold);

struct RankWeights {
    double mos = 1.0;
    double similarity = 0.0;
    double snr = 0.0;
};

/// Parses "w_mos,w_sim,w_snr".
RankWeights parse_weights(std::string_view text);

struct RankedCheckpoint {
    std::int64_t step = 0;
    double score = 0.0;
};

/// Weighted sum of per-metric z-scores (sample std; a constant metric
/// contributes 0). Highest score first, ties to the smaller step. Losses are
/// never consulted. Throws DegenerateWeights, MissingMetric, InsufficientData
/// (empty series) and InvalidArgument (unordered steps).
std::vector<RankedCheckpoint> rank_checkpoints(std::span<const CheckpointPoint> series, const RankWeights& weights);

/// JSON array of points, optionally led by one metadata object that has no
/// "step" key.
CheckpointSeries parse_series(const nlohmann::json& doc);
CheckpointSeries load_series(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const CheckpointSeries& series);

nlohmann::ordered_json to_json(const DivergenceFinding& finding);
nlohmann::ordered_json to_json(std::span<const RankedCheckpoint> ranking);

}  // namespace voxgauge
