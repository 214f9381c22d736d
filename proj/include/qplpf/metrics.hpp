#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qplpf/types.hpp"

namespace qplpf {

/// Root-mean-square difference, skipping the (sorted) excluded indices.
double rms_error(std::span<const double> a, std::span<const double> b,
                 std::span<const std::int64_t> excluded = {});

struct Peak {
    std::int64_t index = 0;
    double value = 0.0;
    bool operator==(const Peak&) const = default;
};

/// Strict interior local maxima; a plateau higher than both flanks reports
/// its leftmost index.
std::vector<Peak> find_peaks(const SampleSeries& series);

/// Piecewise-linear interpolation through the peaks, constant before the
/// first and after the last.
SampleSeries envelope(const SampleSeries& series);

/// RMS of the envelope about its own mean, restricted to the span between
/// the first and last peak (the constant extensions are ignored).
double envelope_variability(const SampleSeries& series);

/// Centered (DC at the midpoint) magnitude of the 2-D DFT of the
/// mean-removed image.
GridImage spectrum2d(const GridImage& image);

} // namespace qplpf
