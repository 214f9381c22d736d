#pragma once

#include <cstdint>
#include <vector>

namespace qplpf {

/// Uniformly sampled 1-D real signal. t_i = start_time + i * dt.
struct SampleSeries {
    double start_time = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t i) const { return start_time + static_cast<double>(i) * dt; }
};

/// Uniformly sampled 2-D real image, row-major.
struct GridImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

enum class MetricKind {
    Euclidean,
};

/// Gaussian noise parameters: standard deviation and generator seed.
struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

} // namespace qplpf
