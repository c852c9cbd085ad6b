// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

// Regenerates data/wada_table.txt.
//
// Speech is modelled as Gamma(shape 0.4) amplitudes with random sign, noise
// as unit-variance Gaussian. One pool of draws is reused for every grid
// point (common random numbers): only the speech gain changes between rows,
// which keeps the Monte-Carlo error correlated across the grid. Each draw is
// also used with its speech sign flipped (antithetic pairs), so the pooled
// statistic is even in the gain and the first-order sampling term cancels;
// without this the low-SNR rows, where beta barely moves, are not monotone.
// The gain is set from the measured powers of the pool, so each row's
// mixture has exactly the nominal SNR.
//
//   wada_table_gen [--samples N] [--seed S] > data/wada_table.txt

#include "voxgauge/signal_metrics.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo generator for the WADA beta -> SNR table"};
    long long samples = 10'000'000;
    std::uint64_t seed = 20080922;
    int lo_db = -20;
    int hi_db = 100;
    double shape = 0.4;
    app.add_option("--samples", samples, "Draws per grid point")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "mt19937_64 seed");
    app.add_option("--lo-db", lo_db);
    app.add_option("--hi-db", hi_db);
    app.add_option("--shape", shape, "Gamma shape of the speech amplitudes");
    CLI11_PARSE(app, argc, argv);

    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(shape, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    const Eigen::Index half = (samples + 1) / 2;
    Eigen::ArrayXd speech(half);
    Eigen::ArrayXd noise(half);
    for (Eigen::Index i = 0; i < speech.size(); ++i) {
        const double g = gamma(rng);
        speech(i) = coin(rng) ? g : -g;
        noise(i) = normal(rng);
    }
    const double speech_power = speech.square().mean();
    const double noise_power = noise.square().mean();

    std::printf("# WADA beta -> SNR lookup table\n");
    std::printf("# speech: Gamma(shape %.2f) amplitudes, random sign; noise: N(0, 1)\n", shape);
    std::printf("# generator: wada_table_gen --samples %lld --seed %llu\n", static_cast<long long>(2 * half),
                static_cast<unsigned long long>(seed));
    std::printf("# columns: snr_db beta\n");
    Eigen::ArrayXd mix(2 * half);
    for (int db = lo_db; db <= hi_db; ++db) {
        const double gain = std::sqrt(std::pow(10.0, db / 10.0) * noise_power / speech_power);
        mix.head(half) = noise + gain * speech;
        mix.tail(half) = noise - gain * speech;
        std::printf("%d %.10f\n", db, voxgauge::wada_beta(mix));
        std::fflush(stdout);
    }
    return 0;
}
