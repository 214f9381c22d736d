#include "qplpf/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

#include "qplpf/baselines.hpp"
#include "qplpf/error.hpp"
#include "qplpf/filter.hpp"
#include "qplpf/metrics.hpp"
#include "qplpf/synth.hpp"

namespace qplpf {

double quantile(std::vector<double> xs, double p) {
    if (xs.empty()) {
        throw invalid_parameter("quantile: empty sample");
    }
    std::sort(xs.begin(), xs.end());
    const double h = (static_cast<double>(xs.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= xs.size()) return xs.back();
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
}

namespace {

enum class Method { Qplpf, Boxcar, Adaptive, Oracle };

Method parse_method(const std::string& name) {
    if (name == "qplpf") return Method::Qplpf;
    if (name == "boxcar") return Method::Boxcar;
    if (name == "adaptive") return Method::Adaptive;
    if (name == "oracle") return Method::Oracle;
    throw invalid_parameter("sweep: unknown method '" + name + "'");
}

// series restricted to its non-flagged samples (in order); flagged indices
// carry copied-through input and would poison envelope statistics
SampleSeries masked_series(const SampleSeries& s, const std::vector<std::int64_t>& flagged) {
    if (flagged.empty()) return s;
    SampleSeries out;
    out.start_time = s.start_time;
    out.dt = s.dt;
    out.values.reserve(s.values.size() - flagged.size());
    std::size_t f = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (f < flagged.size() && flagged[f] == static_cast<std::int64_t>(i)) {
            ++f;
            continue;
        }
        out.values.push_back(s.values[i]);
    }
    return out;
}

} // namespace

SweepResult run_sweep(const SweepConfig& config) {
    if (config.methods.empty()) {
        throw invalid_parameter("sweep: empty method list");
    }
    if (config.trials < 1) {
        throw invalid_parameter("sweep: need at least one trial");
    }
    if (!(config.snr_step > 0.0) || config.snr_max < config.snr_min) {
        throw invalid_parameter("sweep: bad SNR range");
    }
    std::vector<Method> methods;
    for (const auto& name : config.methods) methods.push_back(parse_method(name));

    SweepResult result;
    for (double snr = config.snr_min; snr <= config.snr_max + 1e-9; snr += config.snr_step) {
        result.snr_points.push_back(snr);
    }

    const SampleSeries clean = lfm_chirp(config.fs, config.t_end);
    const double power = mean_power(clean.values);
    PhaseOracle oracle;
    oracle.phase.resize(clean.values.size());
    for (std::size_t i = 0; i < oracle.phase.size(); ++i) {
        const double t = clean.time_at(i);
        oracle.phase[i] = (2.0 * std::numbers::pi / 5.0) * t * (t + 1.0);
    }

    const std::size_t n_snr = result.snr_points.size();
    const std::size_t n_methods = methods.size();
    const auto trials = static_cast<std::size_t>(config.trials);
    result.rms_trials.assign(n_snr, std::vector<std::vector<double>>(
                                        n_methods, std::vector<double>(trials, 0.0)));
    result.envelope_trials = result.rms_trials;

    // Parallel over (snr, trial) cells: each cell writes its own slots, so
    // output is independent of the schedule and thread count.
    const auto n_cells = static_cast<std::int64_t>(n_snr * trials);
    #pragma omp parallel for schedule(dynamic)
    for (std::int64_t cell = 0; cell < n_cells; ++cell) {
        const std::size_t si = static_cast<std::size_t>(cell) / trials;
        const std::size_t trial = static_cast<std::size_t>(cell) % trials;
        const double sigma = snr_to_sigma(result.snr_points[si], power);
        const auto noise =
            awgn(clean.values.size(), {sigma, config.seed + static_cast<std::uint64_t>(trial)});
        SampleSeries noisy = clean;
        for (std::size_t i = 0; i < noisy.values.size(); ++i) noisy.values[i] += noise[i];

        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            SampleSeries output;
            std::vector<std::int64_t> flagged;
            switch (methods[mi]) {
                case Method::Qplpf: {
                    auto r = qplpf_series(noisy, config.qplpf_m, config.qplpf_s);
                    output = std::move(r.output);
                    flagged = std::move(r.flagged);
                    break;
                }
                case Method::Boxcar:
                    output = boxcar(noisy, config.boxcar_k);
                    break;
                case Method::Adaptive:
                    output = adaptive_filter(noisy, config.est_window).output;
                    break;
                case Method::Oracle: {
                    output.start_time = noisy.start_time;
                    output.dt = noisy.dt;
                    output.values = oracle_phase_average(noisy.values, oracle, config.oracle_s);
                    break;
                }
            }
            result.rms_trials[si][mi][trial] = rms_error(output.values, clean.values, flagged);
            result.envelope_trials[si][mi][trial] =
                envelope_variability(masked_series(output, flagged));
        }
    }

    for (std::size_t si = 0; si < n_snr; ++si) {
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            SweepRow rms_row{result.snr_points[si], config.methods[mi],
                             quantile(result.rms_trials[si][mi], 0.5),
                             quantile(result.rms_trials[si][mi], 0.25),
                             quantile(result.rms_trials[si][mi], 0.75)};
            SweepRow env_row{result.snr_points[si], config.methods[mi],
                             quantile(result.envelope_trials[si][mi], 0.5),
                             quantile(result.envelope_trials[si][mi], 0.25),
                             quantile(result.envelope_trials[si][mi], 0.75)};
            result.rms.push_back(rms_row);
            result.envelope.push_back(env_row);
        }
    }
    return result;
}

} // namespace qplpf
