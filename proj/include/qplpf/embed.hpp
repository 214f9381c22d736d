#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qplpf/types.hpp"

namespace qplpf {

/// Integer sample shifts for 1-D embedding. The zero shift is implicit
/// (it is always the first embedding coordinate) and must not appear here.
struct DelaySet {
    std::vector<std::int64_t> offsets;

    std::size_t m() const { return offsets.size(); }
};

struct PixelOffset {
    int dx = 0;
    int dy = 0;
    bool operator==(const PixelOffset&) const = default;
};

/// Pixel shifts for 2-D embedding, zero shift implicit as above.
struct PixelDelaySet {
    std::vector<PixelOffset> offsets;

    std::size_t m() const { return offsets.size(); }
};

/// Point cloud produced by stacking shifted copies of a signal.
/// Row r is the (m+1)-vector (v[i], v[i+g_1], ..., v[i+g_m]) for
/// i = domain_index[r]; rows whose shifts would leave the domain are
/// dropped, so domain_index is strictly increasing but may not cover
/// the whole signal.
struct EmbeddedCloud {
    std::size_t dim = 0;                      // m + 1
    std::vector<double> points;               // row-major, rows() x dim
    std::vector<std::int64_t> domain_index;   // source sample / pixel per row

    std::size_t rows() const { return domain_index.size(); }
    std::span<const double> row(std::size_t r) const {
        return {points.data() + r * dim, dim};
    }
};

/// Unit forward shifts [1, 2, ..., m].
DelaySet consecutive_delays(std::size_t m);

/// All (dx, dy) with 0 <= dx,dy < w except (0,0), dx fastest. m = w*w - 1.
PixelDelaySet square_window_offsets(int w);

EmbeddedCloud embed_series(const SampleSeries& series, const DelaySet& delays);
EmbeddedCloud embed_image(const GridImage& image, const PixelDelaySet& delays);

} // namespace qplpf
