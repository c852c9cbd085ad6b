// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

// Scripted engine for the latency harness tests. Speaks the chunk protocol
// on stdin/stdout and emits frames on a fixed schedule.
//
//   mock_engine --schedule s.txt [--rate 24000]   timed frames, then end marker
//   mock_engine --raw bytes.bin                   dump a file verbatim, exit 0
//   mock_engine --hang                            handshake, then never answer
//   mock_engine --crash                           one frame, then exit 3
//   mock_engine --silent                          exit 0 without output

#include "voxgauge/latency_bench.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

namespace {

void write_all(const void* data, std::size_t n) {
    const auto* p = static_cast<const char*>(data);
    while (n > 0) {
        const ssize_t w = ::write(STDOUT_FILENO, p, n);
        if (w <= 0) std::_Exit(4);
        p += w;
        n -= static_cast<std::size_t>(w);
    }
}

void write_frame(const std::vector<std::uint8_t>& frame) { write_all(frame.data(), frame.size()); }

void handshake(int rate) {
    const std::string line = "NEUBENCH 1 " + std::to_string(rate) + "\n";
    write_all(line.data(), line.size());
}

std::string read_text() {
    std::string line;
    std::getline(std::cin, line);
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mock streaming engine"};
    std::string schedule;
    std::string raw;
    int rate = 24000;
    bool hang = false;
    bool crash = false;
    bool silent = false;
    int exit_code = 0;
    auto* modes = app.add_option_group("mode")->require_option(1);
    modes->add_option("--schedule", schedule);
    modes->add_option("--raw", raw);
    modes->add_flag("--hang", hang);
    modes->add_flag("--crash", crash);
    modes->add_flag("--silent", silent);
    app.add_option("--rate", rate);
    app.add_option("--exit-code", exit_code, "Status after a complete stream");
    CLI11_PARSE(app, argc, argv);

    if (silent) return 0;
    if (!raw.empty()) {
        std::ifstream in(raw, std::ios::binary);
        const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        write_all(bytes.data(), bytes.size());
        return 0;
    }

    handshake(rate);
    if (hang) {
        read_text();
        std::this_thread::sleep_for(std::chrono::hours(1));
        return 0;
    }
    read_text();
    if (crash) {
        write_frame(voxgauge::encode_frame(std::size_t{480}));
        return 3;
    }

    const auto entries = voxgauge::load_schedule(schedule);
    const auto start = std::chrono::steady_clock::now();
    for (const auto& e : entries) {
        const auto samples = static_cast<std::size_t>(std::llround(e.audio_ms * rate / 1000.0));
        const auto frame = voxgauge::encode_frame(samples * 2);
        std::this_thread::sleep_until(start + std::chrono::duration<double, std::milli>(e.arrival_ms));
        write_frame(frame);
    }
    write_frame(voxgauge::encode_frame(std::size_t{0}));
    return exit_code;
}
