#pragma once

#include <span>
#include <vector>

#include "qplpf/types.hpp"

namespace qplpf {

/// Centered moving average of odd width k; windows truncate at the edges.
SampleSeries boxcar(const SampleSeries& series, std::size_t k);

struct FreqEstimate {
    double hz = 0.0;
    bool fallback = false;   // degenerate window, mid-band value returned
};

/// Frequency of the largest non-DC DFT bin of the mean-removed window,
/// bins 1..floor(n/2). All-zero (or too short) windows return fs/4 flagged.
FreqEstimate local_max_frequency(std::span<const double> window, double sample_rate);

struct AdaptiveFilterResult {
    SampleSeries output;
    std::vector<double> frequency;   // per-index local estimate, Hz
    std::vector<int> block;          // per-index averaging width
};

/// Variable-bandwidth baseline: estimate a local maximum frequency over a
/// centered est_window, set the averaging block at Nyquist for it
/// (b = max(1, round(fs / 2f))), then box-average. Even widths center at
/// index floor(b/2) of the window.
AdaptiveFilterResult adaptive_filter(const SampleSeries& series, std::size_t est_window);

} // namespace qplpf
