// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxgauge/checkpoint.hpp"

#include "voxgauge/errors.hpp"
#include "voxgauge/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace voxgauge {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

// Absorbs the representation error of decimal MOS values so that a drop
// printed as 0.2 counts against a 0.2 threshold.
constexpr double kDropEpsilon = 1e-9;

void require_increasing_steps(std::span<const CheckpointPoint> series) {
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].step <= series[i - 1].step) {
            throw InvalidArgument("checkpoint steps must be strictly increasing (step " +
                                  std::to_string(series[i].step) + " follows " + std::to_string(series[i - 1].step) +
                                  ")");
        }
    }
}

std::optional<double> opt_number(const json& obj, const char* key, std::size_t line, bool nonnegative = false) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    if (!obj[key].is_number()) throw SchemaError(line, key, "expected a number");
    const double v = obj[key].get<double>();
    if (!std::isfinite(v)) throw SchemaError(line, key, "not finite");
    if (nonnegative && v < 0.0) throw SchemaError(line, key, "negative");
    return v;
}

double positive_number(const json& obj, const char* key, std::size_t line) {
    const auto v = opt_number(obj, key, line);
    if (!v) throw SchemaError(line, key);
    if (*v <= 0.0) throw SchemaError(line, key, "must be positive");
    return *v;
}

}  // namespace

DivergenceFinding detect_divergence(std::span<const CheckpointPoint> series, double mos_drop_threshold) {
    if (!(mos_drop_threshold > 0.0) || !std::isfinite(mos_drop_threshold)) {
        throw InvalidArgument("mos drop threshold must be a positive number");
    }
    require_increasing_steps(series);

    // Indices of the points carrying both val_loss and mos; left empty when
    // every point does.
    std::vector<std::size_t> keep;
    std::size_t usable = 0;
    for (const auto& p : series) usable += p.val_loss && p.mos ? 1 : 0;
    if (usable < 2) {
        throw InsufficientData("divergence needs at least two checkpoints with both val_loss and mos, got " +
                               std::to_string(usable));
    }
    if (usable != series.size()) {
        keep.reserve(usable);
        for (std::size_t k = 0; k < series.size(); ++k) {
            if (series[k].val_loss && series[k].mos) keep.push_back(k);
        }
    }
    const auto at = [&](std::size_t k) -> const CheckpointPoint& { return series[keep.empty() ? k : keep[k]]; };

    // A window [i, j] qualifies when loss never rises inside it and ends
    // strictly lower, i.e. i and j share a non-increasing run and i sits
    // before j's plateau of equal losses. Track the running MOS maximum over
    // the part of the run that precedes the current plateau.
    const auto loss = [&](std::size_t k) { return *at(k).val_loss; };
    const auto mos = [&](std::size_t k) { return *at(k).mos; };

    DivergenceFinding best;
    std::size_t best_i = 0;
    std::size_t best_j = 0;
    bool found = false;

    std::size_t plateau = 0;      // first index of the current equal-loss plateau
    std::size_t argmax = 0;       // argmax of mos over [run start, plateau)
    bool have_prefix = false;
    std::size_t scanned = 0;      // indices below this are folded into argmax
    for (std::size_t j = 1; j < usable; ++j) {
        if (loss(j) > loss(j - 1)) {
            plateau = j;
            have_prefix = false;
            scanned = j;
            continue;
        }
        if (loss(j) < loss(j - 1)) plateau = j;
        for (; scanned < plateau; ++scanned) {
            if (!have_prefix || mos(scanned) > mos(argmax)) argmax = scanned;
            have_prefix = true;
        }
        if (!have_prefix) continue;
        const double drop = mos(argmax) - mos(j);
        if (drop > 0.0 && (!found || drop > best.mos_drop)) {
            found = true;
            best.mos_drop = drop;
            best_i = argmax;
            best_j = j;
        }
    }

    if (found) {
        best.window = StepWindow{at(best_i).step, at(best_j).step};
        best.loss_drop = loss(best_i) - loss(best_j);
        best.diverged = best.mos_drop >= mos_drop_threshold - kDropEpsilon;
    }
    return best;
}

RankWeights parse_weights(std::string_view text) {
    RankWeights w;
    double* slots[] = {&w.mos, &w.similarity, &w.snr};
    std::size_t k = 0;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::string_view part = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        if (k >= 3) throw InvalidArgument("weights take exactly three values: w_mos,w_sim,w_snr");
        double v = 0.0;
        const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || end != part.data() + part.size() || part.empty()) {
            throw InvalidArgument("bad weight '" + std::string(part) + "'");
        }
        *slots[k++] = v;
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (k != 3) throw InvalidArgument("weights take exactly three values: w_mos,w_sim,w_snr");
    return w;
}

std::vector<RankedCheckpoint> rank_checkpoints(std::span<const CheckpointPoint> series, const RankWeights& weights) {
    const double ws[] = {weights.mos, weights.similarity, weights.snr};
    for (double w : ws) {
        if (!std::isfinite(w) || w < 0.0) throw DegenerateWeights("weights must be finite and non-negative");
    }
    if (ws[0] == 0.0 && ws[1] == 0.0 && ws[2] == 0.0) throw DegenerateWeights("all weights are zero");
    if (series.empty()) throw InsufficientData("no checkpoints to rank");
    require_increasing_steps(series);

    using Field = std::optional<double> CheckpointPoint::*;
    constexpr Field fields[] = {&CheckpointPoint::mos, &CheckpointPoint::similarity_01, &CheckpointPoint::snr_db};
    constexpr const char* names[] = {"mos", "similarity_01", "snr_db"};

    const auto n = static_cast<Eigen::Index>(series.size());
    Eigen::ArrayXd score = Eigen::ArrayXd::Zero(n);
    for (int m = 0; m < 3; ++m) {
        if (ws[m] == 0.0) continue;
        Eigen::ArrayXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& v = series[static_cast<std::size_t>(i)].*fields[m];
            if (!v) {
                throw MissingMetric("checkpoint step " + std::to_string(series[static_cast<std::size_t>(i)].step) +
                                    " has no " + names[m]);
            }
            x(i) = *v;
        }
        const double sd = sample_std(x);
        if (sd > 0.0) score += ws[m] * (x - mean(x)) / sd;
    }

    std::vector<RankedCheckpoint> out;
    out.reserve(series.size());
    for (Eigen::Index i = 0; i < n; ++i) out.push_back({series[static_cast<std::size_t>(i)].step, score(i)});
    std::stable_sort(out.begin(), out.end(), [](const RankedCheckpoint& a, const RankedCheckpoint& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.step < b.step;
    });
    return out;
}

CheckpointSeries parse_series(const nlohmann::json& doc) {
    if (!doc.is_array()) throw SchemaError(0, "<document>", "checkpoint series must be a JSON array");
    CheckpointSeries s;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& rec = doc[i];
        const std::size_t line = i + 1;
        if (!rec.is_object()) throw SchemaError(line, "<record>", "expected an object");
        if (!rec.contains("step")) {
            if (i != 0) throw SchemaError(line, "step");
            TrainingRunMeta meta;
            meta.adapter_rank = static_cast<int>(positive_number(rec, "adapter_rank", line));
            meta.adapter_alpha = positive_number(rec, "adapter_alpha", line);
            meta.batch_size = static_cast<int>(positive_number(rec, "batch_size", line));
            meta.epochs = positive_number(rec, "epochs", line);
            s.meta = meta;
            continue;
        }
        if (!rec["step"].is_number_integer()) throw SchemaError(line, "step", "expected an integer");
        CheckpointPoint p;
        p.step = rec["step"].get<std::int64_t>();
        if (p.step < 0) throw SchemaError(line, "step", "negative");
        if (!s.points.empty() && p.step <= s.points.back().step) {
            throw SchemaError(line, "step", "steps must be strictly increasing");
        }
        p.train_loss = opt_number(rec, "train_loss", line, true);
        p.val_loss = opt_number(rec, "val_loss", line, true);
        p.mos = opt_number(rec, "mos", line);
        p.similarity_01 = opt_number(rec, "similarity_01", line);
        p.snr_db = opt_number(rec, "snr_db", line);
        if (rec.contains("label")) {
            if (!rec["label"].is_string()) throw SchemaError(line, "label", "expected a string");
            p.label = rec["label"].get<std::string>();
        }
        s.points.push_back(std::move(p));
    }
    return s;
}

CheckpointSeries load_series(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open checkpoint series: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(0, "<document>", e.what());
    }
    return parse_series(doc);
}

nlohmann::ordered_json to_json(const CheckpointSeries& series) {
    ojson out = ojson::array();
    if (series.meta) {
        out.push_back({{"adapter_rank", series.meta->adapter_rank},
                       {"adapter_alpha", series.meta->adapter_alpha},
                       {"batch_size", series.meta->batch_size},
                       {"epochs", series.meta->epochs}});
    }
    for (const auto& p : series.points) {
        ojson j{{"step", p.step}};
        if (p.train_loss) j["train_loss"] = *p.train_loss;
        if (p.val_loss) j["val_loss"] = *p.val_loss;
        if (p.mos) j["mos"] = *p.mos;
        if (p.similarity_01) j["similarity_01"] = *p.similarity_01;
        if (p.snr_db) j["snr_db"] = *p.snr_db;
        if (!p.label.empty()) j["label"] = p.label;
        out.push_back(std::move(j));
    }
    return out;
}

nlohmann::ordered_json to_json(const DivergenceFinding& finding) {
    ojson j{{"diverged", finding.diverged}};
    if (finding.window) {
        j["window"] = {{"step_start", finding.window->step_start}, {"step_end", finding.window->step_end}};
    } else {
        j["window"] = nullptr;
    }
    j["mos_drop"] = finding.mos_drop;
    j["loss_drop"] = finding.loss_drop;
    return j;
}

nlohmann::ordered_json to_json(std::span<const RankedCheckpoint> ranking) {
    ojson out = ojson::array();
    for (const auto& r : ranking) out.push_back({{"step", r.step}, {"score", r.score}});
    return out;
}

}  // namespace voxgauge
