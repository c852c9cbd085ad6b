// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

// Machine-readable and tabular views of library results, shared by the CLI
// and its golden tests.

#pragma once

#include "voxgauge/checkpoint.hpp"
#include "voxgauge/dataset.hpp"
#include "voxgauge/format.hpp"
#include "voxgauge/signal_metrics.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace voxgauge {

struct ClipSnr {
    std::string path;
    SnrEstimate estimate;
};

struct ClipEnergy {
    std::string path;
    EnergyProfile profile;
};

struct SpeakerAnalysis {
    SpeakerDatasetStats stats;
    AdaptationForecast forecast;
    DecodingParams decoding;
};

SpeakerAnalysis analyze_speaker(const Manifest& manifest, std::string_view speaker_id, const ScoreSet* scores,
                                const EnergyOptions& options);

struct SelectionResult {
    std::optional<DivergenceFinding> divergence;  // empty when the series lacks loss/MOS pairs
    std::vector<RankedCheckpoint> ranking;
};

nlohmann::ordered_json to_json(const ClipSnr& r);
nlohmann::ordered_json to_json(const ClipEnergy& r);
nlohmann::ordered_json to_json(const SpeakerAnalysis& a);
nlohmann::ordered_json to_json(const SelectionResult& s);

std::string render(std::span<const ClipSnr> rows, Format format);
std::string render(std::span<const ClipEnergy> rows, Format format);
std::string render(std::span<const SpeakerAnalysis> rows, Format format);
std::string render(const SelectionResult& s, Format format);

}  // namespace voxgauge
