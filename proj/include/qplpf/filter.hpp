#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qplpf/graph.hpp"
#include "qplpf/types.hpp"

namespace qplpf {

/// Known phase values (angles), one per domain index, for test signals
/// where the phase is available analytically.
struct PhaseOracle {
    std::vector<double> phase;
};

/// Replace each sample that owns a graph vertex by the mean of itself and
/// its neighbors' samples; samples without a vertex pass through unchanged.
/// Summation order is fixed (self first, then neighbors in list order).
std::vector<double> neighborhood_average(std::span<const double> values,
                                         const NeighborGraph& graph,
                                         std::span<const std::int64_t> domain_index);

struct SeriesFilterResult {
    SampleSeries output;
    std::vector<std::int64_t> flagged;   // indices with no embedding row (input copied)
    bool s_clipped = false;
};

struct ImageFilterResult {
    GridImage output;
    std::vector<std::int64_t> flagged;   // row-major pixel indices, as above
    bool s_clipped = false;
};

/// Intermediate stages of a pipeline run, for callers that want to inspect
/// or export the embedding and graph.
struct PipelineDetail {
    EmbeddedCloud cloud;
    NeighborGraph graph;
};

/// Full pipeline for series: embed with consecutive delays, build the
/// S-nearest-neighbor graph, average neighborhoods.
SeriesFilterResult qplpf_series(const SampleSeries& series, std::size_t m, std::size_t S,
                                MetricKind metric = MetricKind::Euclidean,
                                PipelineDetail* detail = nullptr);

/// Full pipeline for images with a w x w matching window.
ImageFilterResult qplpf_image(const GridImage& image, int w, std::size_t S,
                              MetricKind metric = MetricKind::Euclidean,
                              PipelineDetail* detail = nullptr);

/// Averaging stage run against a known phase instead of the estimated one.
/// Each index averages itself with the S indices nearest in wrapped phase
/// distance; ties are resolved by index proximity, then smaller index.
std::vector<double> oracle_phase_average(std::span<const double> values,
                                         const PhaseOracle& oracle, std::size_t S);

} // namespace qplpf
