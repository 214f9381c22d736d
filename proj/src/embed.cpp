#include "qplpf/embed.hpp"

#include <algorithm>
#include <cmath>

#include "qplpf/error.hpp"

namespace qplpf {

DelaySet consecutive_delays(std::size_t m) {
    if (m < 1) {
        throw invalid_parameter("consecutive_delays: m must be positive");
    }
    DelaySet d;
    d.offsets.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        d.offsets[k] = static_cast<std::int64_t>(k) + 1;
    }
    return d;
}

PixelDelaySet square_window_offsets(int w) {
    if (w < 1) {
        throw invalid_parameter("square_window_offsets: w must be positive");
    }
    PixelDelaySet d;
    d.offsets.reserve(static_cast<std::size_t>(w) * w - 1);
    for (int dy = 0; dy < w; ++dy) {
        for (int dx = 0; dx < w; ++dx) {
            if (dx == 0 && dy == 0) continue;
            d.offsets.push_back({dx, dy});
        }
    }
    return d;
}

namespace {

template <typename T>
void check_offsets(const std::vector<T>& offsets, const T& zero) {
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (offsets[i] == zero) {
            throw invalid_parameter("embed: the zero offset is implicit and must not be listed");
        }
        for (std::size_t j = i + 1; j < offsets.size(); ++j) {
            if (offsets[i] == offsets[j]) {
                throw invalid_parameter("embed: duplicate offset");
            }
        }
    }
}

} // namespace

EmbeddedCloud embed_series(const SampleSeries& series, const DelaySet& delays) {
    const auto n = static_cast<std::int64_t>(series.values.size());
    if (n == 0) {
        throw invalid_parameter("embed_series: empty series");
    }
    check_offsets(delays.offsets, std::int64_t{0});
    std::int64_t min_off = 0;
    std::int64_t max_off = 0;
    for (auto g : delays.offsets) {
        min_off = std::min(min_off, g);
        max_off = std::max(max_off, g);
    }
    const std::int64_t lo = -min_off;          // first valid index
    const std::int64_t hi = n - max_off;       // one past last valid index
    if (lo >= hi) {
        throw domain_too_short("embed_series: delay span exceeds series length");
    }

    EmbeddedCloud cloud;
    cloud.dim = delays.m() + 1;
    cloud.domain_index.resize(static_cast<std::size_t>(hi - lo));
    cloud.points.resize(cloud.domain_index.size() * cloud.dim);
    for (std::int64_t i = lo; i < hi; ++i) {
        const auto r = static_cast<std::size_t>(i - lo);
        cloud.domain_index[r] = i;
        double* row = cloud.points.data() + r * cloud.dim;
        row[0] = series.values[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < delays.m(); ++k) {
            row[k + 1] = series.values[static_cast<std::size_t>(i + delays.offsets[k])];
        }
    }
    return cloud;
}

EmbeddedCloud embed_image(const GridImage& image, const PixelDelaySet& delays) {
    if (image.width < 1 || image.height < 1 ||
        image.values.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw invalid_parameter("embed_image: malformed image");
    }
    check_offsets(delays.offsets, PixelOffset{0, 0});
    int max_dx = 0;
    int max_dy = 0;
    for (auto [dx, dy] : delays.offsets) {
        max_dx = std::max(max_dx, dx);
        max_dy = std::max(max_dy, dy);
    }
    const int vw = image.width - max_dx;
    const int vh = image.height - max_dy;
    if (vw <= 0 || vh <= 0) {
        throw domain_too_short("embed_image: window exceeds image size");
    }

    EmbeddedCloud cloud;
    cloud.dim = delays.m() + 1;
    cloud.domain_index.resize(static_cast<std::size_t>(vw) * vh);
    cloud.points.resize(cloud.domain_index.size() * cloud.dim);
    std::size_t r = 0;
    for (int y = 0; y < vh; ++y) {
        for (int x = 0; x < vw; ++x, ++r) {
            cloud.domain_index[r] = static_cast<std::int64_t>(y) * image.width + x;
            double* row = cloud.points.data() + r * cloud.dim;
            row[0] = image.at(x, y);
            for (std::size_t k = 0; k < delays.m(); ++k) {
                row[k + 1] = image.at(x + delays.offsets[k].dx, y + delays.offsets[k].dy);
            }
        }
    }
    return cloud;
}

} // namespace qplpf
