// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "voxgauge/format.hpp"
#include "voxgauge/scorer_bridge.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace voxgauge {

enum class Metric { Mos, Snr, Similarity };

std::string_view to_string(Metric metric);

/// Mean of `metric` in `m`, if present.
std::optional<double> metric_value(const AggregateMetrics& m, Metric metric);

inline constexpr std::string_view kBaseLabel = "base";
inline constexpr std::string_view kRefLabel = "ref";

struct ConditionAggregates {
    std::string label;
    AggregateMetrics metrics;
};

/// `condition` minus base for one metric.
struct DeltaRow {
    std::string condition;
    Metric metric = Metric::Mos;
    double value = 0.0;
};

/// Percent increase of `numerator` over `denominator` for one metric.
struct PctRow {
    std::string numerator;
    std::string denominator;
    Metric metric = Metric::Mos;
    double pct = 0.0;
};

struct ComparisonReport {
    std::string speaker_id;
    std::vector<ConditionAggregates> conditions;
    std::vector<DeltaRow> deltas;
    std::vector<PctRow> pct_rows;

    const ConditionAggregates* condition(std::string_view label) const;
    std::optional<double> delta(std::string_view condition, Metric metric) const;
    std::optional<double> delta_mos_vs_base(std::string_view condition) const {
        return delta(condition, Metric::Mos);
    }
    std::optional<double> pct(std::string_view numerator, std::string_view denominator, Metric metric) const;
};

/// 100 * (new - base) / base. Throws DivisionByZero when base is 0.
double pct_increase(double new_value, double base_value);

/// Every condition other than "base" and "ref" is a candidate. Deltas are
/// candidate - base; percent rows are base/ref, candidate/ref and
/// candidate/base, each only where both operands carry the metric.
ComparisonReport comparison_report(std::string speaker_id, std::vector<ConditionAggregates> conditions);

nlohmann::ordered_json to_json(const ComparisonReport& report);
ComparisonReport report_from_json(const nlohmann::json& doc);

/// Table and CSV print three decimals; JSON keeps full precision.
std::string render(const ComparisonReport& report, Format format);
std::string render(std::span<const ComparisonReport> reports, Format format);

/// Reads a JSON file holding one report object or an array of them.
std::vector<ComparisonReport> load_reports(const std::filesystem::path& path);

}  // namespace voxgauge
