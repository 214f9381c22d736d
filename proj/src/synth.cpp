#include "qplpf/synth.hpp"

#include <cmath>
#include <numbers>

#include "qplpf/error.hpp"

namespace qplpf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SampleSeries lfm_chirp(double fs, double t_end) {
    if (!(fs > 0.0) || !(t_end > 0.0)) {
        throw invalid_parameter("lfm_chirp: fs and t_end must be positive");
    }
    const auto n = static_cast<std::size_t>(std::llround(fs * t_end)) + 1;
    SampleSeries s;
    s.start_time = 0.0;
    s.dt = 1.0 / fs;
    s.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        s.values[i] = std::sin((kTwoPi / 5.0) * t * (t + 1.0));
    }
    return s;
}

SampleSeries periodic_sine(std::size_t period_samples, std::size_t n_periods) {
    if (period_samples < 2) {
        throw invalid_parameter("periodic_sine: period must be at least 2 samples");
    }
    if (n_periods < 1) {
        throw invalid_parameter("periodic_sine: need at least one period");
    }
    SampleSeries s;
    s.start_time = 0.0;
    s.dt = 1.0;
    s.values.resize(period_samples * n_periods);
    // phase from i mod p keeps repeats bit-identical
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const auto r = static_cast<double>(i % period_samples);
        s.values[i] = std::sin(kTwoPi * r / static_cast<double>(period_samples));
    }
    return s;
}

std::vector<double> awgn(std::size_t n, const NoiseSpec& spec) {
    if (n < 1) {
        throw invalid_parameter("awgn: n must be positive");
    }
    if (spec.sigma < 0.0) {
        throw invalid_parameter("awgn: sigma must be non-negative");
    }
    std::vector<double> out(n, 0.0);
    if (spec.sigma == 0.0) {
        return out;
    }
    SplitMix64 rng(spec.seed);
    for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = rng.next_double();
        const double u2 = rng.next_double();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        out[i] = spec.sigma * r * std::cos(kTwoPi * u2);
        if (i + 1 < n) {
            out[i + 1] = spec.sigma * r * std::sin(kTwoPi * u2);
        }
    }
    return out;
}

double snr_to_sigma(double snr_db, double signal_power) {
    if (!(signal_power > 0.0)) {
        throw invalid_parameter("snr_to_sigma: signal power must be positive");
    }
    return std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0));
}

GridImage warped_sine_image(int width, int height, double a, double b, double c) {
    if (width < 2 || height < 2) {
        throw invalid_parameter("warped_sine_image: dimensions must be at least 2");
    }
    GridImage img;
    img.width = width;
    img.height = height;
    img.values.resize(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double xx = static_cast<double>(x);
            const double yy = static_cast<double>(y);
            img.at(x, y) = std::sin(kTwoPi * (a * xx + b * yy + 0.5 * c * (xx * xx + yy * yy)));
        }
    }
    return img;
}

double mean_power(const std::vector<double>& values) {
    if (values.empty()) {
        throw invalid_parameter("mean_power: empty input");
    }
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return acc / static_cast<double>(values.size());
}

} // namespace qplpf
