#include "qplpf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

#include "qplpf/error.hpp"

namespace qplpf {

namespace {

// Mean over the centered window of width `width` at index i, truncated to
// the series. Even widths center at offset width/2 (left-leaning).
double truncated_window_mean(const std::vector<double>& v, std::int64_t i, std::int64_t width) {
    const auto n = static_cast<std::int64_t>(v.size());
    const std::int64_t lo = std::max<std::int64_t>(0, i - width / 2);
    const std::int64_t hi = std::min(n, i - width / 2 + width);
    double acc = 0.0;
    for (std::int64_t k = lo; k < hi; ++k) acc += v[static_cast<std::size_t>(k)];
    return acc / static_cast<double>(hi - lo);
}

} // namespace

SampleSeries boxcar(const SampleSeries& series, std::size_t k) {
    if (k < 1 || k % 2 == 0) {
        throw invalid_parameter("boxcar: width must be a positive odd integer");
    }
    if (k > series.values.size()) {
        throw invalid_parameter("boxcar: width exceeds series length");
    }
    SampleSeries out;
    out.start_time = series.start_time;
    out.dt = series.dt;
    out.values.resize(series.values.size());
    const auto n = static_cast<std::int64_t>(series.values.size());
    for (std::int64_t i = 0; i < n; ++i) {
        out.values[static_cast<std::size_t>(i)] =
            truncated_window_mean(series.values, i, static_cast<std::int64_t>(k));
    }
    return out;
}

FreqEstimate local_max_frequency(std::span<const double> window, double sample_rate) {
    if (!(sample_rate > 0.0)) {
        throw invalid_parameter("local_max_frequency: sample rate must be positive");
    }
    const std::size_t n = window.size();
    if (n < 4) {
        return {sample_rate / 4.0, true};
    }
    bool constant = true;
    for (double v : window) {
        if (v != window[0]) {
            constant = false;
            break;
        }
    }
    if (constant) {
        return {sample_rate / 4.0, true};
    }
    double mean = 0.0;
    for (double v : window) mean += v;
    mean /= static_cast<double>(n);

    // direct DFT over bins 1..n/2 of the mean-removed window; the windows
    // here are small (tens of samples), so O(n^2) is fine
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    std::size_t best_bin = 1;
    double best_mag = -1.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = step * static_cast<double>(k) * static_cast<double>(t);
            const double v = window[t] - mean;
            re += v * std::cos(ang);
            im -= v * std::sin(ang);
        }
        const double mag = re * re + im * im;
        if (mag > best_mag) {
            best_mag = mag;
            best_bin = k;
        }
    }
    return {static_cast<double>(best_bin) * sample_rate / static_cast<double>(n), false};
}

AdaptiveFilterResult adaptive_filter(const SampleSeries& series, std::size_t est_window) {
    if (est_window < 1 || est_window > series.values.size()) {
        throw invalid_parameter("adaptive_filter: estimation window out of range");
    }
    const double fs = 1.0 / series.dt;
    const auto n = static_cast<std::int64_t>(series.values.size());
    const auto w = static_cast<std::int64_t>(est_window);

    AdaptiveFilterResult result;
    result.output.start_time = series.start_time;
    result.output.dt = series.dt;
    result.output.values.resize(series.values.size());
    result.frequency.resize(series.values.size());
    result.block.resize(series.values.size());

    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t lo = std::max<std::int64_t>(0, i - w / 2);
        const std::int64_t hi = std::min(n, i - w / 2 + w);
        const auto est = local_max_frequency(
            {series.values.data() + lo, static_cast<std::size_t>(hi - lo)}, fs);
        const auto b = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::llround(fs / (2.0 * est.hz))));
        result.frequency[static_cast<std::size_t>(i)] = est.hz;
        result.block[static_cast<std::size_t>(i)] = static_cast<int>(b);
        result.output.values[static_cast<std::size_t>(i)] =
            truncated_window_mean(series.values, i, b);
    }
    return result;
}

} // namespace qplpf
