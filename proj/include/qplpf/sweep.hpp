#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qplpf {

/// Monte-Carlo comparison of the filters on the noisy chirp across SNR.
/// Trial t draws its noise from seed (base seed + t); the same noisy
/// signal feeds every method, so comparisons are paired.
struct SweepConfig {
    double snr_min = -5.0;
    double snr_max = 20.0;
    double snr_step = 5.0;
    int trials = 20;
    std::uint64_t seed = 1;
    std::vector<std::string> methods = {"qplpf", "boxcar", "adaptive", "oracle"};

    // chirp
    double fs = 50.0;
    double t_end = 10.0;

    // per-method parameters (chirp-study defaults)
    std::size_t qplpf_m = 49;
    std::size_t qplpf_s = 10;
    std::size_t boxcar_k = 11;
    std::size_t est_window = 50;
    std::size_t oracle_s = 10;
};

struct SweepRow {
    double snr_db = 0.0;
    std::string method;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

struct SweepResult {
    std::vector<double> snr_points;
    std::vector<SweepRow> rms;        // snr-major, then methods in config order
    std::vector<SweepRow> envelope;
    // raw per-trial values, [snr][method][trial], for tests and reporting
    std::vector<std::vector<std::vector<double>>> rms_trials;
    std::vector<std::vector<std::vector<double>>> envelope_trials;
};

SweepResult run_sweep(const SweepConfig& config);

/// Linear-interpolation quantile of a copy of xs (R type-7).
double quantile(std::vector<double> xs, double p);

} // namespace qplpf
