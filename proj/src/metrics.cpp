#include "qplpf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qplpf/error.hpp"

namespace qplpf {

double rms_error(std::span<const double> a, std::span<const double> b,
                 std::span<const std::int64_t> excluded) {
    if (a.size() != b.size()) {
        throw shape_mismatch("rms_error: length mismatch");
    }
    std::size_t ex = 0;   // cursor into the sorted excluded list
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (ex < excluded.size() && excluded[ex] < static_cast<std::int64_t>(i)) ++ex;
        if (ex < excluded.size() && excluded[ex] == static_cast<std::int64_t>(i)) continue;
        const double d = a[i] - b[i];
        acc += d * d;
        ++count;
    }
    if (count == 0) {
        throw undefined_metric("rms_error: no unmasked samples");
    }
    return std::sqrt(acc / static_cast<double>(count));
}

std::vector<Peak> find_peaks(const SampleSeries& series) {
    const auto& v = series.values;
    const std::size_t n = v.size();
    std::vector<Peak> peaks;
    if (n < 3) return peaks;
    std::size_t i = 1;
    while (i < n - 1) {
        // extend a plateau of equal values; report its leftmost index
        std::size_t j = i;
        while (j + 1 < n && v[j + 1] == v[i]) ++j;
        if (j < n - 1 && v[i] > v[i - 1] && v[i] > v[j + 1]) {
            peaks.push_back({static_cast<std::int64_t>(i), v[i]});
        }
        i = j + 1;
    }
    return peaks;
}

namespace {

std::vector<Peak> peaks_or_throw(const SampleSeries& series) {
    auto peaks = find_peaks(series);
    if (peaks.size() < 2) {
        throw degenerate_envelope("envelope: need at least two peaks");
    }
    return peaks;
}

SampleSeries interpolate_envelope(const SampleSeries& series, const std::vector<Peak>& peaks) {
    SampleSeries env;
    env.start_time = series.start_time;
    env.dt = series.dt;
    env.values.assign(series.values.size(), 0.0);
    const auto first = static_cast<std::size_t>(peaks.front().index);
    const auto last = static_cast<std::size_t>(peaks.back().index);
    for (std::size_t i = 0; i < first; ++i) env.values[i] = peaks.front().value;
    for (std::size_t i = last; i < env.values.size(); ++i) env.values[i] = peaks.back().value;
    for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
        const auto x0 = peaks[p].index;
        const auto x1 = peaks[p + 1].index;
        for (std::int64_t x = x0; x < x1; ++x) {
            const double t = static_cast<double>(x - x0) / static_cast<double>(x1 - x0);
            env.values[static_cast<std::size_t>(x)] =
                peaks[p].value * (1.0 - t) + peaks[p + 1].value * t;
        }
    }
    return env;
}

} // namespace

SampleSeries envelope(const SampleSeries& series) {
    return interpolate_envelope(series, peaks_or_throw(series));
}

double envelope_variability(const SampleSeries& series) {
    const auto peaks = peaks_or_throw(series);
    const auto env = interpolate_envelope(series, peaks);
    const auto first = static_cast<std::size_t>(peaks.front().index);
    const auto last = static_cast<std::size_t>(peaks.back().index);
    double mean = 0.0;
    for (std::size_t i = first; i <= last; ++i) mean += env.values[i];
    mean /= static_cast<double>(last - first + 1);
    double acc = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double d = env.values[i] - mean;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(last - first + 1));
}

namespace {

// direct DFT along one axis; images here are at most a few hundred pixels
// per side, so O(n^2) lines are acceptable and keep the dependency surface at zero
void dft_lines(std::vector<std::complex<double>>& data, int count, int length,
               int stride_line, int stride_elem) {
    const double step = -2.0 * std::numbers::pi / static_cast<double>(length);
    std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(length));
    for (int k = 0; k < length; ++k) {
        twiddle[static_cast<std::size_t>(k)] = {std::cos(step * k), std::sin(step * k)};
    }
    std::vector<std::complex<double>> line(static_cast<std::size_t>(length));
    for (int l = 0; l < count; ++l) {
        std::complex<double>* base = data.data() + static_cast<std::size_t>(l) * stride_line;
        for (int k = 0; k < length; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (int t = 0; t < length; ++t) {
                acc += base[static_cast<std::size_t>(t) * stride_elem] *
                       twiddle[static_cast<std::size_t>((static_cast<std::int64_t>(k) * t) % length)];
            }
            line[static_cast<std::size_t>(k)] = acc;
        }
        for (int k = 0; k < length; ++k) {
            base[static_cast<std::size_t>(k) * stride_elem] = line[static_cast<std::size_t>(k)];
        }
    }
}

} // namespace

GridImage spectrum2d(const GridImage& image) {
    if (image.width < 1 || image.height < 1 ||
        image.values.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw invalid_parameter("spectrum2d: malformed image");
    }
    const int w = image.width;
    const int h = image.height;
    double mean = 0.0;
    for (double v : image.values) mean += v;
    mean /= static_cast<double>(image.values.size());

    std::vector<std::complex<double>> data(image.values.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = {image.values[i] - mean, 0.0};
    }
    dft_lines(data, h, w, w, 1);   // rows
    dft_lines(data, w, h, 1, w);   // columns

    // unitary normalization keeps sum |spec|^2 == n_pixels * variance
    const double norm = 1.0 / std::sqrt(static_cast<double>(image.values.size()));

    // center DC: output pixel (x, y) holds bin ((x - w/2) mod w, (y - h/2) mod h)
    GridImage out;
    out.width = w;
    out.height = h;
    out.values.resize(image.values.size());
    for (int y = 0; y < h; ++y) {
        const int sy = (y - h / 2 + h) % h;
        for (int x = 0; x < w; ++x) {
            const int sx = (x - w / 2 + w) % w;
            out.at(x, y) = norm * std::abs(data[static_cast<std::size_t>(sy) * w + sx]);
        }
    }
    return out;
}

} // namespace qplpf
