#pragma once

#include <cstdint>
#include <vector>

#include "qplpf/embed.hpp"
#include "qplpf/types.hpp"

namespace qplpf {

/// Directed S-nearest-neighbor graph over an embedded cloud.
///
/// Every vertex is implicitly adjacent to itself; neighbor lists never
/// contain the vertex and hold exactly min(S, n-1) entries, sorted by
/// (squared distance, vertex id) ascending. Ties in distance are broken
/// toward the smaller vertex id so that independent implementations
/// produce identical graphs.
struct NeighborGraph {
    std::size_t S = 0;                              // effective S after clipping
    bool s_clipped = false;                         // requested S exceeded n-1
    std::vector<std::vector<std::int32_t>> neighbors;
};

/// Exhaustive pairwise-distance reference. Single-threaded; the ground
/// truth the indexed kernel is tested against.
NeighborGraph knn_brute(const EmbeddedCloud& cloud, std::size_t S,
                        MetricKind metric = MetricKind::Euclidean);

/// Same contract as knn_brute, built for speed: a k-d tree with
/// OpenMP-parallel queries in low dimension, and a parallel scan kernel
/// once the dimension is too high for space partitioning to pay off.
/// Output is bit-identical to knn_brute in all regimes.
NeighborGraph knn_indexed(const EmbeddedCloud& cloud, std::size_t S,
                          MetricKind metric = MetricKind::Euclidean);

} // namespace qplpf
