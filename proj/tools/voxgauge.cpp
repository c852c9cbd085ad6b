// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Each subcommand parses flags, calls the library
// and prints the rendered result; exit status 1 for domain errors, 2 for
// usage errors.

#include "voxgauge/audio_io.hpp"
#include "voxgauge/checkpoint.hpp"
#include "voxgauge/dataset.hpp"
#include "voxgauge/errors.hpp"
#include "voxgauge/eval_report.hpp"
#include "voxgauge/latency_bench.hpp"
#include "voxgauge/output.hpp"
#include "voxgauge/scorer_bridge.hpp"
#include "voxgauge/signal_metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace voxgauge;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileNotFound("cannot write " + out_path);
    out << text;
    if (!out) throw Error("write failed: " + out_path);
}

Eigen::VectorXd load_embedding(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open reference embedding: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(0, "<document>", e.what());
    }
    if (!doc.is_array() || doc.empty()) throw SchemaError(0, "embedding", "expected a non-empty array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(doc.size()));
    for (std::size_t i = 0; i < doc.size(); ++i) {
        if (!doc[i].is_number()) throw SchemaError(i + 1, "embedding", "not a number");
        v(static_cast<Eigen::Index>(i)) = doc[i].get<double>();
    }
    return v;
}

struct Common {
    std::string format = "json";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table-text", "table"}))
        ->capture_default_str();
    cmd->add_option("-o,--out", c.out, "Write output to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voxgauge: evaluation toolkit for fine-tuned TTS voices", "voxgauge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "voxgauge 0.1.0");

    // snr
    Common snr_c;
    std::vector<std::string> snr_inputs;
    auto* snr = app.add_subcommand("snr", "Blind WADA SNR estimate per WAV file");
    snr->add_option("inputs", snr_inputs, "WAV files")->required();
    add_common(snr, snr_c);

    // energy
    Common energy_c;
    std::vector<std::string> energy_inputs;
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    auto* energy = app.add_subcommand("energy", "Frame energy statistics per WAV file");
    energy->add_option("inputs", energy_inputs, "WAV files")->required();
    energy->add_option("--frame-ms", frame_ms)->capture_default_str();
    energy->add_option("--hop-ms", hop_ms)->capture_default_str();
    add_common(energy, energy_c);

    // analyze
    Common analyze_c;
    std::string analyze_manifest;
    std::vector<std::string> analyze_speakers;
    std::string analyze_scores;
    EnergyOptions analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "Per-speaker dataset statistics, forecast and decoding advice");
    analyze->add_option("manifest", analyze_manifest, "JSONL manifest")->required();
    analyze->add_option("--speaker", analyze_speakers, "Speaker to analyze (repeatable; default all)");
    analyze->add_option("--scores", analyze_scores, "Score file supplying per-clip MOS");
    analyze->add_option("--frame-ms", analyze_opts.frame_ms)->capture_default_str();
    analyze->add_option("--hop-ms", analyze_opts.hop_ms)->capture_default_str();
    analyze->add_option("--jobs", analyze_opts.jobs)->check(CLI::PositiveNumber)->capture_default_str();
    add_common(analyze, analyze_c);

    // eval
    Common eval_c;
    std::string eval_speaker;
    std::vector<std::string> eval_conditions;
    std::string eval_reference;
    auto* eval = app.add_subcommand("eval", "Aggregate score files per condition and compare against base");
    eval->add_option("--speaker", eval_speaker, "Speaker id for the report")->required();
    eval->add_option("--condition", eval_conditions, "label=scores.json (repeatable; one label must be 'base')")
        ->required();
    eval->add_option("--reference-embedding", eval_reference, "JSON array used for similarity");
    add_common(eval, eval_c);

    // select
    Common select_c;
    std::string select_series;
    double mos_drop_threshold = kDefaultMosDropThreshold;
    std::string weights_text = "1,0,0";
    auto* select = app.add_subcommand("select", "Detect loss/quality divergence and rank checkpoints");
    select->add_option("series", select_series, "Checkpoint series JSON")->required();
    select->add_option("--mos-drop-threshold", mos_drop_threshold)->capture_default_str();
    select->add_option("--weights", weights_text, "w_mos,w_sim,w_snr")->capture_default_str();
    add_common(select, select_c);

    // mix
    std::vector<std::string> mix_manifests;
    std::vector<std::string> mix_takes;
    std::string mix_out;
    std::optional<std::uint64_t> mix_seed;
    auto* mix = app.add_subcommand("mix", "Build a mixed training manifest");
    mix->add_option("--manifest", mix_manifests, "Input manifest (repeatable)")->required();
    mix->add_option("--take", mix_takes, "SPEAKER=2h, SPEAKER=1/3, SPEAKER=0.25 or SPEAKER=25% (repeatable)")
        ->required();
    mix->add_option("--shuffle-seed", mix_seed, "Shuffle each speaker's clips with this seed first");
    mix->add_option("-o,--out", mix_out, "Output manifest (default stdout)");

    // bench
    Common bench_c;
    std::string bench_engine;
    std::string bench_text = "The quick brown fox jumps over the lazy dog.";
    std::string bench_replay;
    int bench_rate = kDefaultReplayRate;
    BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "Measure first-chunk latency and per-chunk RTF");
    auto* engine_opt = bench->add_option("--engine", bench_engine, "Engine command, run through /bin/sh -c");
    auto* replay_opt = bench->add_option("--replay", bench_replay, "Schedule file for virtual-clock replay");
    engine_opt->excludes(replay_opt);
    bench->add_option("--text", bench_text, "Input text")->capture_default_str();
    bench->add_option("--runs", bench_opts.runs)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--timeout-s", bench_opts.timeout_s)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_flag("--include-warmup", bench_opts.include_warmup, "Count the warm-up run in the aggregates");
    bench->add_option("--rate", bench_rate, "Sample rate for replay")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(bench, bench_c);

    // report
    Common report_c;
    std::string report_input;
    auto* report = app.add_subcommand("report", "Render saved comparison reports");
    report->add_option("input", report_input, "Report JSON (object or array)")->required();
    add_common(report, report_c);

    if (argc < 2) {
        std::cerr << app.help();
        return kExitUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*snr) {
            std::vector<ClipSnr> rows;
            for (const auto& p : snr_inputs) rows.push_back({p, wada_snr(load_wav(p))});
            emit(render(std::span<const ClipSnr>(rows), parse_format(snr_c.format)), snr_c.out);
        } else if (*energy) {
            std::vector<ClipEnergy> rows;
            for (const auto& p : energy_inputs) rows.push_back({p, energy_profile(load_wav(p), frame_ms, hop_ms)});
            emit(render(std::span<const ClipEnergy>(rows), parse_format(energy_c.format)), energy_c.out);
        } else if (*analyze) {
            const Manifest manifest = load_manifest(analyze_manifest);
            std::optional<ScoreSet> scores;
            if (!analyze_scores.empty()) scores = load_scores(analyze_scores);
            if (analyze_speakers.empty()) analyze_speakers = manifest.speakers();
            std::vector<SpeakerAnalysis> rows;
            for (const auto& s : analyze_speakers) {
                rows.push_back(analyze_speaker(manifest, s, scores ? &*scores : nullptr, analyze_opts));
            }
            emit(render(std::span<const SpeakerAnalysis>(rows), parse_format(analyze_c.format)), analyze_c.out);
        } else if (*eval) {
            std::optional<Eigen::VectorXd> reference;
            if (!eval_reference.empty()) reference = load_embedding(eval_reference);
            std::vector<ConditionAggregates> conditions;
            for (const auto& c : eval_conditions) {
                const auto eq = c.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == c.size()) {
                    throw InvalidArgument("--condition expects label=scores.json, got '" + c + "'");
                }
                conditions.push_back({c.substr(0, eq), aggregate(load_scores(c.substr(eq + 1)), reference)});
            }
            const auto r = comparison_report(eval_speaker, std::move(conditions));
            emit(render(r, parse_format(eval_c.format)), eval_c.out);
        } else if (*select) {
            const auto series = load_series(select_series);
            SelectionResult result;
            std::size_t usable = 0;
            for (const auto& p : series.points) usable += p.val_loss && p.mos ? 1 : 0;
            if (usable >= 2) result.divergence = detect_divergence(series.points, mos_drop_threshold);
            result.ranking = rank_checkpoints(series.points, parse_weights(weights_text));
            emit(render(result, parse_format(select_c.format)), select_c.out);
        } else if (*mix) {
            std::vector<Manifest> inputs;
            for (const auto& m : mix_manifests) inputs.push_back(load_manifest(m));
            MixSpec spec;
            for (const auto& t : mix_takes) spec.targets.push_back(parse_mix_target(t));
            spec.shuffle_seed = mix_seed;
            const Manifest out = build_mix_manifest(inputs, spec);
            std::ostringstream text;
            write_manifest(text, out);
            emit(text.str(), mix_out);
        } else if (*bench) {
            LatencyReport r;
            if (!bench_replay.empty()) {
                r = summarize({replay_schedule(load_schedule(bench_replay), bench_rate)});
            } else if (!bench_engine.empty()) {
                r = run_bench(bench_engine, bench_text, bench_opts);
            } else {
                std::cerr << "bench: one of --engine or --replay is required\n";
                return kExitUsage;
            }
            emit(render(r, parse_format(bench_c.format)), bench_c.out);
        } else if (*report) {
            const auto reports = load_reports(report_input);
            emit(render(std::span<const ComparisonReport>(reports), parse_format(report_c.format)), report_c.out);
        }
    } catch (const Error& e) {
        std::cerr << "voxgauge: error: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}
