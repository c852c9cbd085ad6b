// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxgauge/eval_report.hpp"

#include "voxgauge/errors.hpp"
#include "table.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace voxgauge {
namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

constexpr Metric kMetrics[] = {Metric::Mos, Metric::Snr, Metric::Similarity};

Metric metric_from_string(std::string_view s) {
    if (s == "mos") return Metric::Mos;
    if (s == "snr") return Metric::Snr;
    if (s == "similarity") return Metric::Similarity;
    throw SchemaError(0, "metric", "unknown metric '" + std::string(s) + "'");
}

// One output row shared by the CSV and table renderers.
struct Row {
    std::string kind;
    std::string name;
    std::string n;
    std::optional<double> mos;
    std::optional<double> mos_std;
    std::optional<double> snr;
    std::optional<double> snr_std;
    std::optional<double> sim;
};

std::vector<Row> rows_of(const ComparisonReport& r) {
    std::vector<Row> rows;
    for (const auto& c : r.conditions) {
        const auto& m = c.metrics;
        rows.push_back({"condition", c.label, std::to_string(m.n), m.mos_mean, m.mos_std, m.snr_mean_db,
                        m.snr_std_db, m.similarity_mean});
    }
    auto place = [](Row& row, Metric metric, double v) {
        switch (metric) {
            case Metric::Mos: row.mos = v; break;
            case Metric::Snr: row.snr = v; break;
            case Metric::Similarity: row.sim = v; break;
        }
    };
    auto row_for = [&rows](const std::string& kind, const std::string& name) -> Row& {
        for (auto& row : rows) {
            if (row.kind == kind && row.name == name) return row;
        }
        rows.push_back({kind, name, {}, {}, {}, {}, {}, {}});
        return rows.back();
    };
    for (const auto& d : r.deltas) place(row_for("delta", d.condition + "-" + std::string(kBaseLabel)), d.metric, d.value);
    for (const auto& p : r.pct_rows) place(row_for("pct", p.numerator + "/" + p.denominator), p.metric, p.pct);
    return rows;
}

constexpr const char* kCsvHeader[] = {"speaker_id", "row",        "kind",       "n",
                                      "mos_mean",   "mos_std",    "snr_mean_db", "snr_std_db",
                                      "similarity_mean"};

detail::Cells cells(const std::string& speaker, const Row& row) {
    using detail::fixed;
    return {speaker,        row.name,           row.kind,      row.n,         fixed(row.mos),
            fixed(row.mos_std), fixed(row.snr), fixed(row.snr_std), fixed(row.sim)};
}

std::string render_csv(std::span<const ComparisonReport> reports) {
    std::vector<detail::Cells> rows{{std::begin(kCsvHeader), std::end(kCsvHeader)}};
    for (const auto& r : reports) {
        for (const auto& row : rows_of(r)) rows.push_back(cells(r.speaker_id, row));
    }
    return detail::csv(rows);
}

std::string render_table(std::span<const ComparisonReport> reports) {
    std::string out;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        std::vector<detail::Cells> table{{"row", "n", "mos", "mos_std", "snr_db", "snr_std", "similarity"}};
        for (const auto& row : rows_of(r)) {
            const auto c = cells(r.speaker_id, row);
            const std::string name = row.kind == "condition" ? row.name : row.kind + " " + row.name;
            table.push_back({name, c[3], c[4], c[5], c[6], c[7], c[8]});
        }
        if (k) out += '\n';
        out += "speaker " + r.speaker_id + "\n" + detail::aligned(table);
    }
    return out;
}

std::optional<double> opt_number(const json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_number()) throw SchemaError(0, key, "expected a number");
    return obj[key].get<double>();
}

}  // namespace

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::Mos: return "mos";
        case Metric::Snr: return "snr";
        case Metric::Similarity: return "similarity";
    }
    return "mos";
}

std::optional<double> metric_value(const AggregateMetrics& m, Metric metric) {
    switch (metric) {
        case Metric::Mos: return m.mos_mean;
        case Metric::Snr: return m.snr_mean_db;
        case Metric::Similarity: return m.similarity_mean;
    }
    return std::nullopt;
}

const ConditionAggregates* ComparisonReport::condition(std::string_view label) const {
    for (const auto& c : conditions) {
        if (c.label == label) return &c;
    }
    return nullptr;
}

std::optional<double> ComparisonReport::delta(std::string_view cond, Metric metric) const {
    for (const auto& d : deltas) {
        if (d.condition == cond && d.metric == metric) return d.value;
    }
    return std::nullopt;
}

std::optional<double> ComparisonReport::pct(std::string_view numerator, std::string_view denominator,
                                            Metric metric) const {
    for (const auto& p : pct_rows) {
        if (p.numerator == numerator && p.denominator == denominator && p.metric == metric) return p.pct;
    }
    return std::nullopt;
}

double pct_increase(double new_value, double base_value) {
    if (base_value == 0.0) throw DivisionByZero("percent increase over a zero base");
    return 100.0 * (new_value - base_value) / base_value;
}

ComparisonReport comparison_report(std::string speaker_id, std::vector<ConditionAggregates> conditions) {
    std::unordered_set<std::string> labels;
    for (const auto& c : conditions) {
        if (c.label.empty()) throw InvalidArgument("empty condition label");
        if (!labels.insert(c.label).second) throw InvalidArgument("duplicate condition label: " + c.label);
    }

    ComparisonReport r;
    r.speaker_id = std::move(speaker_id);
    r.conditions = std::move(conditions);
    const ConditionAggregates* base = r.condition(kBaseLabel);
    if (!base) throw MissingBase("report for speaker " + r.speaker_id + " has no 'base' condition");
    const ConditionAggregates* ref = r.condition(kRefLabel);

    std::vector<const ConditionAggregates*> candidates;
    for (const auto& c : r.conditions) {
        if (c.label != kBaseLabel && c.label != kRefLabel) candidates.push_back(&c);
    }

    for (const auto* c : candidates) {
        for (Metric m : kMetrics) {
            const auto v = metric_value(c->metrics, m);
            const auto b = metric_value(base->metrics, m);
            if (v && b) r.deltas.push_back({c->label, m, *v - *b});
        }
    }

    auto add_pct = [&](const ConditionAggregates& num, const ConditionAggregates& den) {
        for (Metric m : kMetrics) {
            const auto a = metric_value(num.metrics, m);
            const auto b = metric_value(den.metrics, m);
            if (a && b) r.pct_rows.push_back({num.label, den.label, m, pct_increase(*a, *b)});
        }
    };
    if (ref) add_pct(*base, *ref);
    for (const auto* c : candidates) {
        if (ref) add_pct(*c, *ref);
        add_pct(*c, *base);
    }
    return r;
}

nlohmann::ordered_json to_json(const ComparisonReport& report) {
    ojson out;
    out["speaker_id"] = report.speaker_id;
    out["conditions"] = ojson::array();
    for (const auto& c : report.conditions) {
        ojson j;
        j["label"] = c.label;
        j["n"] = c.metrics.n;
        if (c.metrics.mos_mean) j["mos_mean"] = *c.metrics.mos_mean;
        if (c.metrics.mos_std) j["mos_std"] = *c.metrics.mos_std;
        if (c.metrics.snr_mean_db) j["snr_mean_db"] = *c.metrics.snr_mean_db;
        if (c.metrics.snr_std_db) j["snr_std_db"] = *c.metrics.snr_std_db;
        if (c.metrics.similarity_mean) j["similarity_mean"] = *c.metrics.similarity_mean;
        out["conditions"].push_back(std::move(j));
    }
    out["deltas"] = ojson::array();
    for (const auto& d : report.deltas) {
        out["deltas"].push_back({{"condition", d.condition}, {"metric", to_string(d.metric)}, {"value", d.value}});
    }
    out["pct_rows"] = ojson::array();
    for (const auto& p : report.pct_rows) {
        out["pct_rows"].push_back({{"numerator", p.numerator},
                                   {"denominator", p.denominator},
                                   {"metric", to_string(p.metric)},
                                   {"pct", p.pct}});
    }
    return out;
}

ComparisonReport report_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("speaker_id") || !doc["speaker_id"].is_string()) {
        throw SchemaError(0, "speaker_id");
    }
    ComparisonReport r;
    r.speaker_id = doc["speaker_id"].get<std::string>();
    for (const auto& c : doc.value("conditions", json::array())) {
        ConditionAggregates ca;
        if (!c.contains("label") || !c["label"].is_string()) throw SchemaError(0, "label");
        ca.label = c["label"].get<std::string>();
        ca.metrics.n = c.value("n", std::size_t{0});
        ca.metrics.mos_mean = opt_number(c, "mos_mean");
        ca.metrics.mos_std = opt_number(c, "mos_std");
        ca.metrics.snr_mean_db = opt_number(c, "snr_mean_db");
        ca.metrics.snr_std_db = opt_number(c, "snr_std_db");
        ca.metrics.similarity_mean = opt_number(c, "similarity_mean");
        r.conditions.push_back(std::move(ca));
    }
    for (const auto& d : doc.value("deltas", json::array())) {
        r.deltas.push_back({d.at("condition").get<std::string>(), metric_from_string(d.at("metric").get<std::string>()),
                            d.at("value").get<double>()});
    }
    for (const auto& p : doc.value("pct_rows", json::array())) {
        r.pct_rows.push_back({p.at("numerator").get<std::string>(), p.at("denominator").get<std::string>(),
                              metric_from_string(p.at("metric").get<std::string>()), p.at("pct").get<double>()});
    }
    return r;
}

std::string render(std::span<const ComparisonReport> reports, Format format) {
    switch (format) {
        case Format::Csv: return render_csv(reports);
        case Format::TableText: return render_table(reports);
        case Format::Json: {
            ojson arr = ojson::array();
            for (const auto& r : reports) arr.push_back(to_json(r));
            return arr.dump(2) + "\n";
        }
    }
    return {};
}

std::string render(const ComparisonReport& report, Format format) {
    if (format == Format::Json) return to_json(report).dump(2) + "\n";
    return render(std::span<const ComparisonReport>(&report, 1), format);
}

std::vector<ComparisonReport> load_reports(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open report: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(0, "<document>", e.what());
    } catch (const json::exception& e) {
        throw SchemaError(0, "<document>", e.what());
    }
    std::vector<ComparisonReport> out;
    try {
        if (doc.is_array()) {
            for (const auto& r : doc) out.push_back(report_from_json(r));
        } else {
            out.push_back(report_from_json(doc));
        }
    } catch (const json::exception& e) {
        throw SchemaError(0, "<report>", e.what());
    }
    return out;
}

}  // namespace voxgauge
