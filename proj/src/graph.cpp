#include "qplpf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <omp.h>

#include "qplpf/error.hpp"

namespace qplpf {

namespace {

// Space partitioning stops paying off well below this dimension, but the
// crossover is data-dependent; 16 keeps the tree for every regime where it
// can win and the flat scan (with early exit) for wide embeddings.
constexpr std::size_t kMaxTreeDim = 16;
constexpr std::size_t kLeafSize = 24;

struct Candidate {
    double d2;
    std::int32_t id;
};

// "a beats b": closer, or equally close with the smaller id. The kept set
// under this order realizes the smaller-id tie-break.
inline bool better(const Candidate& a, const Candidate& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.id < b.id;
}

// Fixed-capacity worst-on-top heap of the best S candidates seen.
class BestSet {
public:
    explicit BestSet(std::size_t cap) : cap_(cap) { heap_.reserve(cap); }

    bool full() const { return heap_.size() == cap_; }
    double bound() const { return full() ? heap_.front().d2 : std::numeric_limits<double>::infinity(); }

    void offer(double d2, std::int32_t id) {
        if (!full()) {
            heap_.push_back({d2, id});
            std::push_heap(heap_.begin(), heap_.end(), better);
        } else if (better({d2, id}, heap_.front())) {
            std::pop_heap(heap_.begin(), heap_.end(), better);
            heap_.back() = {d2, id};
            std::push_heap(heap_.begin(), heap_.end(), better);
        }
    }

    std::vector<std::int32_t> sorted_ids() {
        std::sort(heap_.begin(), heap_.end(), better);
        std::vector<std::int32_t> ids(heap_.size());
        for (std::size_t i = 0; i < heap_.size(); ++i) ids[i] = heap_[i].id;
        return ids;
    }

private:
    std::size_t cap_;
    std::vector<Candidate> heap_;
};

// Shared by every search path so distances are bit-identical everywhere.
// Bails out once the partial sum alone rules the candidate out; the check
// runs once per block so the inner loop stays vectorizable.
inline double dist2_bounded(const double* a, const double* b, std::size_t dim, double bound) {
    constexpr std::size_t kBlock = 16;
    double acc = 0.0;
    std::size_t k = 0;
    while (dim - k >= kBlock) {
        for (std::size_t j = 0; j < kBlock; ++j) {
            const double d = a[k + j] - b[k + j];
            acc += d * d;
        }
        k += kBlock;
        if (acc > bound) return acc;
    }
    for (; k < dim; ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc;
}

void scan_range(const EmbeddedCloud& cloud, std::int32_t v,
                std::int32_t first, std::int32_t last, BestSet& best) {
    const double* pv = cloud.points.data() + static_cast<std::size_t>(v) * cloud.dim;
    for (std::int32_t w = first; w < last; ++w) {
        if (w == v) continue;
        const double* pw = cloud.points.data() + static_cast<std::size_t>(w) * cloud.dim;
        const double d2 = dist2_bounded(pv, pw, cloud.dim, best.bound());
        if (d2 <= best.bound()) best.offer(d2, w);
    }
}

std::vector<std::int32_t> brute_neighbors(const EmbeddedCloud& cloud, std::int32_t v, std::size_t S) {
    BestSet best(S);
    scan_range(cloud, v, 0, static_cast<std::int32_t>(cloud.rows()), best);
    return best.sorted_ids();
}

// Exact k-d tree over the cloud. Nodes partition a permutation array; the
// split axis is the widest extent in the node's range, the split point the
// (coordinate, id)-median. Both choices are deterministic, so two builds
// over the same cloud are identical.
class KdTree {
public:
    explicit KdTree(const EmbeddedCloud& cloud) : cloud_(cloud) {
        const auto n = static_cast<std::int32_t>(cloud.rows());
        perm_.resize(n);
        for (std::int32_t i = 0; i < n; ++i) perm_[i] = i;
        nodes_.reserve(2 * static_cast<std::size_t>(n) / kLeafSize + 2);
        root_ = build(0, n);
    }

    void query(std::int32_t v, BestSet& best) const {
        const double* pv = cloud_.points.data() + static_cast<std::size_t>(v) * cloud_.dim;
        search(root_, v, pv, best);
    }

private:
    struct Node {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t axis = -1;   // -1 marks a leaf
        double split = 0.0;
        std::int32_t lo = 0, hi = 0;   // permutation range (scanned only in leaves)
    };

    double coord(std::int32_t idx, std::size_t axis) const {
        return cloud_.points[static_cast<std::size_t>(idx) * cloud_.dim + axis];
    }

    std::int32_t build(std::int32_t lo, std::int32_t hi) {
        Node node;
        node.lo = lo;
        node.hi = hi;
        if (hi - lo <= static_cast<std::int32_t>(kLeafSize)) {
            nodes_.push_back(node);
            return static_cast<std::int32_t>(nodes_.size() - 1);
        }
        // widest-extent axis
        std::size_t axis = 0;
        double best_extent = -1.0;
        for (std::size_t a = 0; a < cloud_.dim; ++a) {
            double mn = coord(perm_[lo], a), mx = mn;
            for (std::int32_t i = lo + 1; i < hi; ++i) {
                const double c = coord(perm_[i], a);
                mn = std::min(mn, c);
                mx = std::max(mx, c);
            }
            if (mx - mn > best_extent) {
                best_extent = mx - mn;
                axis = a;
            }
        }
        const std::int32_t mid = lo + (hi - lo) / 2;
        std::nth_element(perm_.begin() + lo, perm_.begin() + mid, perm_.begin() + hi,
                         [&](std::int32_t a, std::int32_t b) {
                             const double ca = coord(a, axis), cb = coord(b, axis);
                             return ca != cb ? ca < cb : a < b;
                         });
        node.axis = static_cast<std::int32_t>(axis);
        node.split = coord(perm_[mid], axis);
        const auto self = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(node);
        const std::int32_t l = build(lo, mid + 1);
        const std::int32_t r = build(mid + 1, hi);
        nodes_[self].left = l;
        nodes_[self].right = r;
        return self;
    }

    void search(std::int32_t ni, std::int32_t v, const double* pv, BestSet& best) const {
        const Node& node = nodes_[static_cast<std::size_t>(ni)];
        if (node.axis < 0) {
            for (std::int32_t i = node.lo; i < node.hi; ++i) {
                const std::int32_t w = perm_[i];
                if (w == v) continue;
                const double* pw = cloud_.points.data() + static_cast<std::size_t>(w) * cloud_.dim;
                const double d2 = dist2_bounded(pv, pw, cloud_.dim, best.bound());
                if (d2 <= best.bound()) best.offer(d2, w);
            }
            return;
        }
        const double diff = pv[static_cast<std::size_t>(node.axis)] - node.split;
        const std::int32_t near = diff <= 0.0 ? node.left : node.right;
        const std::int32_t far = diff <= 0.0 ? node.right : node.left;
        search(near, v, pv, best);
        // Equality must still descend: a far point tied on distance can win
        // by id, so only a strictly larger plane distance prunes.
        if (!best.full() || diff * diff <= best.bound()) {
            search(far, v, pv, best);
        }
    }

    const EmbeddedCloud& cloud_;
    std::vector<std::int32_t> perm_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

std::size_t checked_clip(const EmbeddedCloud& cloud, std::size_t S, MetricKind metric,
                         bool* clipped) {
    if (metric != MetricKind::Euclidean) {
        throw undefined_metric("knn: unsupported metric");
    }
    if (S < 1) {
        throw invalid_parameter("knn: S must be positive");
    }
    const std::size_t n = cloud.rows();
    if (n < 2) {
        throw too_few_points("knn: need at least two points");
    }
    if (cloud.points.size() != n * cloud.dim || cloud.dim == 0) {
        throw shape_mismatch("knn: malformed cloud");
    }
    *clipped = S > n - 1;
    return std::min(S, n - 1);
}

} // namespace

NeighborGraph knn_brute(const EmbeddedCloud& cloud, std::size_t S, MetricKind metric) {
    NeighborGraph g;
    g.S = checked_clip(cloud, S, metric, &g.s_clipped);
    const auto n = static_cast<std::int32_t>(cloud.rows());
    g.neighbors.resize(static_cast<std::size_t>(n));
    for (std::int32_t v = 0; v < n; ++v) {
        g.neighbors[static_cast<std::size_t>(v)] = brute_neighbors(cloud, v, g.S);
    }
    return g;
}

NeighborGraph knn_indexed(const EmbeddedCloud& cloud, std::size_t S, MetricKind metric) {
    NeighborGraph g;
    g.S = checked_clip(cloud, S, metric, &g.s_clipped);
    const auto n = static_cast<std::int32_t>(cloud.rows());
    g.neighbors.resize(static_cast<std::size_t>(n));

    if (cloud.dim > kMaxTreeDim) {
        // high-dimension fallback: the flat scan, parallel over queries
        #pragma omp parallel for schedule(dynamic, 16)
        for (std::int32_t v = 0; v < n; ++v) {
            g.neighbors[static_cast<std::size_t>(v)] = brute_neighbors(cloud, v, g.S);
        }
        return g;
    }

    const KdTree tree(cloud);
    #pragma omp parallel for schedule(dynamic, 64)
    for (std::int32_t v = 0; v < n; ++v) {
        BestSet best(g.S);
        tree.query(v, best);
        g.neighbors[static_cast<std::size_t>(v)] = best.sorted_ids();
    }
    return g;
}

} // namespace qplpf
