// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#include "reference_tables.hpp"
#include "test_util.hpp"
#include "voxgauge/errors.hpp"
#include "voxgauge/eval_report.hpp"

#include <doctest.h>

#include <random>

using namespace voxgauge;
using voxgauge::testing::data_path;
using voxgauge::testing::read_text;

namespace {

AggregateMetrics metrics(std::size_t n, std::optional<double> mos, std::optional<double> mos_std,
                         std::optional<double> snr, std::optional<double> snr_std, std::optional<double> sim) {
    AggregateMetrics m;
    m.n = n;
    m.mos_mean = mos;
    m.mos_std = mos_std;
    m.snr_mean_db = snr;
    m.snr_std_db = snr_std;
    m.similarity_mean = sim;
    return m;
}

// Same inputs as the golden files in tests/data.
ComparisonReport speaker2_fixture() {
    return comparison_report("2", {{"ref", metrics(5, 4.145, 0.210, 27.047, 3.5, std::nullopt)},
                                   {"base", metrics(5, 3.717, 0.120, 31.562, 2.25, 0.750)},
                                   {"lora_1000", metrics(5, 4.141, 0.095, 39.567, 1.75, 0.801)}});
}

}  // namespace

TEST_SUITE("eval_report") {
    TEST_CASE("percent increase examples") {
        CHECK(std::abs(pct_increase(55.854, 41.747) - 33.79) <= 0.01);
        CHECK(std::abs(pct_increase(4.172, 3.717) - 12.24) <= 0.02);
        for (double x : {-3.0, 1e-6, 2.5, 1e9}) CHECK(pct_increase(x, x) == 0.0);
        CHECK_THROWS_AS(pct_increase(1.0, 0.0), DivisionByZero);
        CHECK(pct_increase(-2.0, -4.0) == -50.0);
    }

    TEST_CASE("percent increase inverts scaling") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> mag(1e-3, 1e3);
        std::uniform_real_distribution<double> pct(-99.0, 500.0);
        for (int k = 0; k < 10000; ++k) {
            const double b = (rng() & 1 ? 1.0 : -1.0) * mag(rng);
            const double p = pct(rng);
            CHECK(std::abs(pct_increase(b * (1.0 + p / 100.0), b) - p) <= 1e-9);
        }
    }

    TEST_CASE("every printed MOS delta reproduces from its columns") {
        for (const auto& row : reference::kFineTune) {
            const auto r = comparison_report(std::string(row.speaker),
                                             {{"base", metrics(5, row.base_mos, {}, {}, {}, {})},
                                              {"lora_1000", metrics(5, row.lora_1000_mos, {}, {}, {}, {})}});
            const double d = *r.delta_mos_vs_base("lora_1000");
            CHECK(d == r.conditions[1].metrics.mos_mean.value() - r.conditions[0].metrics.mos_mean.value());
            CHECK(std::abs(d - row.printed_delta) <= 0.0005);
        }
    }

    TEST_CASE("deltas and percent rows") {
        const auto r = speaker2_fixture();
        CHECK(*r.delta_mos_vs_base("lora_1000") == 4.141 - 3.717);
        CHECK(*r.delta("lora_1000", Metric::Snr) == 39.567 - 31.562);
        CHECK(*r.delta("lora_1000", Metric::Similarity) == 0.801 - 0.750);
        CHECK_FALSE(r.delta("ref", Metric::Mos));
        CHECK(*r.pct("lora_1000", "base", Metric::Snr) == pct_increase(39.567, 31.562));
        CHECK(*r.pct("base", "ref", Metric::Mos) == pct_increase(3.717, 4.145));
        CHECK_FALSE(r.pct("base", "ref", Metric::Similarity));
        CHECK_FALSE(r.pct("lora_1000", "ref", Metric::Similarity));
        CHECK(r.pct_rows.size() == 7);
        CHECK(r.deltas.size() == 3);
    }

    TEST_CASE("identical aggregates give zero deltas and percents") {
        const auto m = metrics(3, 3.5, 0.1, 20.0, 1.0, 0.8);
        const auto r = comparison_report("x", {{"base", m}, {"lora", m}});
        for (const auto& d : r.deltas) CHECK(d.value == 0.0);
        for (const auto& p : r.pct_rows) CHECK(p.pct == 0.0);
        CHECK(r.deltas.size() == 3);
        CHECK(r.pct_rows.size() == 3);
    }

    TEST_CASE("without ref the ref rows are absent") {
        const auto r = comparison_report("x", {{"base", metrics(3, 3.5, {}, {}, {}, {})},
                                               {"lora", metrics(3, 3.7, {}, {}, {}, {})}});
        CHECK(r.pct_rows.size() == 1);
        CHECK(r.pct_rows[0].denominator == "base");
        CHECK(r.condition("ref") == nullptr);
    }

    TEST_CASE("missing metrics are omitted") {
        const auto r = comparison_report("x", {{"base", metrics(3, 3.5, {}, {}, {}, {})},
                                               {"lora", metrics(3, {}, {}, 20.0, {}, {})}});
        CHECK(r.deltas.empty());
        CHECK(r.pct_rows.empty());
    }

    TEST_CASE("report preconditions") {
        CHECK_THROWS_AS(comparison_report("x", {{"lora", {}}}), MissingBase);
        CHECK_THROWS_AS(comparison_report("x", {}), MissingBase);
        CHECK_THROWS_AS(comparison_report("x", {{"base", {}}, {"base", {}}}), InvalidArgument);
        CHECK_THROWS_AS(comparison_report("x", {{"base", {}}, {"", {}}}), InvalidArgument);
        CHECK_THROWS_AS(comparison_report("x", {{"base", metrics(1, 0.0, {}, {}, {}, {})},
                                                {"lora", metrics(1, 1.0, {}, {}, {}, {})}}),
                        DivisionByZero);
    }

    TEST_CASE("CSV and table output match the golden files") {
        const auto r = speaker2_fixture();
        CHECK(render(r, Format::Csv) == read_text(data_path("report_speaker2.golden.csv")));
        CHECK(render(r, Format::TableText) == read_text(data_path("report_speaker2.golden.txt")));
        CHECK(render(r, Format::Csv) == render(speaker2_fixture(), Format::Csv));
    }

    TEST_CASE("CSV header order") {
        const auto csv = render(speaker2_fixture(), Format::Csv);
        CHECK(csv.substr(0, csv.find('\n')) ==
              "speaker_id,row,kind,n,mos_mean,mos_std,snr_mean_db,snr_std_db,similarity_mean");
    }

    TEST_CASE("several reports render in order") {
        const auto a = speaker2_fixture();
        auto b = speaker2_fixture();
        b.speaker_id = "1212";
        const std::vector<ComparisonReport> both = {a, b};
        const auto text = render(std::span<const ComparisonReport>(both), Format::TableText);
        CHECK(text.find("speaker 2\n") == 0);
        CHECK(text.find("\nspeaker 1212\n") != std::string::npos);
        const auto csv = render(std::span<const ComparisonReport>(both), Format::Csv);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 7);
    }

    TEST_CASE("JSON round trip is lossless") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(0.5, 50.0);
        for (int k = 0; k < 50; ++k) {
            const auto r = comparison_report(
                "spk" + std::to_string(k), {{"base", metrics(5, u(rng), u(rng), u(rng), u(rng), u(rng) / 50.0)},
                                            {"ref", metrics(5, u(rng), {}, u(rng), {}, {})},
                                            {"lora", metrics(4, u(rng), u(rng), {}, {}, u(rng) / 50.0)}});
            const std::string text = render(r, Format::Json);
            const auto back = report_from_json(nlohmann::json::parse(text));
            CHECK(render(back, Format::Json) == text);
            CHECK(back.pct_rows.size() == r.pct_rows.size());
            for (std::size_t i = 0; i < r.pct_rows.size(); ++i) CHECK(back.pct_rows[i].pct == r.pct_rows[i].pct);
            CHECK(*back.conditions[0].metrics.similarity_mean == *r.conditions[0].metrics.similarity_mean);
            CHECK_FALSE(back.conditions[1].metrics.mos_std);
        }
    }

    TEST_CASE("loading saved reports") {
        voxgauge::testing::TempDir dir;
        const auto r = speaker2_fixture();
        voxgauge::testing::write_text(dir / "one.json", render(r, Format::Json));
        voxgauge::testing::write_text(dir / "many.json",
                                      render(std::span<const ComparisonReport>(&r, 1), Format::Json));
        CHECK(load_reports(dir / "one.json").size() == 1);
        CHECK(load_reports(dir / "many.json").size() == 1);
        CHECK(render(load_reports(dir / "one.json")[0], Format::Csv) == render(r, Format::Csv));

        voxgauge::testing::write_text(dir / "bad.json", R"({"speaker_id":"x","deltas":[{"metric":"mos"}]})");
        CHECK_THROWS_AS(load_reports(dir / "bad.json"), SchemaError);
        voxgauge::testing::write_text(dir / "bad2.json", R"({"speaker_id":"x","pct_rows":[{"numerator":"a",
            "denominator":"b","metric":"loudness","pct":1}]})");
        CHECK_THROWS_AS(load_reports(dir / "bad2.json"), SchemaError);
        voxgauge::testing::write_text(dir / "bad3.json", "{");
        CHECK_THROWS_AS(load_reports(dir / "bad3.json"), SchemaError);
        CHECK_THROWS_AS(load_reports(dir / "missing.json"), FileNotFound);
    }

    TEST_CASE("format names") {
        CHECK(parse_format("json") == Format::Json);
        CHECK(parse_format("csv") == Format::Csv);
        CHECK(parse_format("table-text") == Format::TableText);
        CHECK(parse_format("table") == Format::TableText);
        CHECK_THROWS_AS(parse_format("xml"), InvalidArgument);
    }
}
