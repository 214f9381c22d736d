#include "qplpf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <omp.h>

#include "qplpf/embed.hpp"
#include "qplpf/error.hpp"

namespace qplpf {

std::vector<double> neighborhood_average(std::span<const double> values,
                                         const NeighborGraph& graph,
                                         std::span<const std::int64_t> domain_index) {
    if (graph.neighbors.size() != domain_index.size()) {
        throw shape_mismatch("neighborhood_average: graph/domain size mismatch");
    }
    const auto n_values = static_cast<std::int64_t>(values.size());
    for (auto d : domain_index) {
        if (d < 0 || d >= n_values) {
            throw shape_mismatch("neighborhood_average: domain index out of range");
        }
    }

    std::vector<double> out(values.begin(), values.end());
    const auto rows = static_cast<std::int64_t>(domain_index.size());
    #pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
        const auto i = domain_index[static_cast<std::size_t>(r)];
        const auto& nb = graph.neighbors[static_cast<std::size_t>(r)];
        double acc = values[static_cast<std::size_t>(i)];
        for (auto j : nb) {
            acc += values[static_cast<std::size_t>(domain_index[static_cast<std::size_t>(j)])];
        }
        out[static_cast<std::size_t>(i)] = acc / static_cast<double>(1 + nb.size());
    }
    return out;
}

namespace {

std::vector<std::int64_t> uncovered_indices(std::size_t n, std::span<const std::int64_t> covered) {
    std::vector<char> has(n, 0);
    for (auto i : covered) has[static_cast<std::size_t>(i)] = 1;
    std::vector<std::int64_t> out;
    out.reserve(n - covered.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!has[i]) out.push_back(static_cast<std::int64_t>(i));
    }
    return out;
}

} // namespace

SeriesFilterResult qplpf_series(const SampleSeries& series, std::size_t m, std::size_t S,
                                MetricKind metric, PipelineDetail* detail) {
    EmbeddedCloud cloud = embed_series(series, consecutive_delays(m));
    NeighborGraph graph = knn_indexed(cloud, S, metric);
    SeriesFilterResult result;
    result.output.start_time = series.start_time;
    result.output.dt = series.dt;
    result.output.values = neighborhood_average(series.values, graph, cloud.domain_index);
    result.flagged = uncovered_indices(series.values.size(), cloud.domain_index);
    result.s_clipped = graph.s_clipped;
    if (detail) {
        detail->cloud = std::move(cloud);
        detail->graph = std::move(graph);
    }
    return result;
}

ImageFilterResult qplpf_image(const GridImage& image, int w, std::size_t S, MetricKind metric,
                              PipelineDetail* detail) {
    EmbeddedCloud cloud = embed_image(image, square_window_offsets(w));
    NeighborGraph graph = knn_indexed(cloud, S, metric);
    ImageFilterResult result;
    result.output.width = image.width;
    result.output.height = image.height;
    result.output.values = neighborhood_average(image.values, graph, cloud.domain_index);
    result.flagged = uncovered_indices(image.values.size(), cloud.domain_index);
    result.s_clipped = graph.s_clipped;
    if (detail) {
        detail->cloud = std::move(cloud);
        detail->graph = std::move(graph);
    }
    return result;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double p) {
    double w = std::fmod(p, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;   // [0, 2*pi)
}

double circ_dist(double a, double b) {
    const double d = std::fabs(a - b);
    return std::min(d, kTwoPi - d);
}

// Candidates at one phase value, ordered by (|i - j|, j). Members is the
// ascending original-index segment of one equal-phase run.
class RunCursor {
public:
    RunCursor(std::span<const std::int64_t> members, std::int64_t center)
        : members_(members) {
        const auto it = std::lower_bound(members_.begin(), members_.end(), center);
        right_ = static_cast<std::ptrdiff_t>(it - members_.begin());
        left_ = right_ - 1;
        if (right_ < static_cast<std::ptrdiff_t>(members_.size()) &&
            members_[static_cast<std::size_t>(right_)] == center) {
            ++right_;   // skip self
        }
        center_ = center;
    }

    bool empty() const {
        return left_ < 0 && right_ >= static_cast<std::ptrdiff_t>(members_.size());
    }

    // peek/pop next-best member
    std::int64_t peek() const {
        const bool has_l = left_ >= 0;
        const bool has_r = right_ < static_cast<std::ptrdiff_t>(members_.size());
        if (has_l && has_r) {
            const std::int64_t l = members_[static_cast<std::size_t>(left_)];
            const std::int64_t r = members_[static_cast<std::size_t>(right_)];
            return (center_ - l) <= (r - center_) ? l : r;   // tie -> smaller index (left)
        }
        return has_l ? members_[static_cast<std::size_t>(left_)]
                     : members_[static_cast<std::size_t>(right_)];
    }

    std::int64_t pop() {
        const std::int64_t v = peek();
        if (left_ >= 0 && members_[static_cast<std::size_t>(left_)] == v) {
            --left_;
        } else {
            ++right_;
        }
        return v;
    }

private:
    std::span<const std::int64_t> members_;
    std::ptrdiff_t left_ = -1, right_ = 0;
    std::int64_t center_ = 0;
};

std::int64_t key_distance(std::int64_t i, std::int64_t j) {
    return std::llabs(i - j);
}

// Emit up to `need` candidates from one or two tied runs, globally ordered
// by (|i - j|, j).
void emit_event(std::vector<RunCursor>& cursors, std::int64_t i, std::size_t need,
                std::vector<std::int64_t>& out) {
    while (need > 0) {
        int best = -1;
        for (int c = 0; c < static_cast<int>(cursors.size()); ++c) {
            if (cursors[static_cast<std::size_t>(c)].empty()) continue;
            if (best < 0) {
                best = c;
                continue;
            }
            const std::int64_t a = cursors[static_cast<std::size_t>(c)].peek();
            const std::int64_t b = cursors[static_cast<std::size_t>(best)].peek();
            const auto da = key_distance(i, a);
            const auto db = key_distance(i, b);
            if (da < db || (da == db && a < b)) best = c;
        }
        if (best < 0) break;
        out.push_back(cursors[static_cast<std::size_t>(best)].pop());
        --need;
    }
}

} // namespace

std::vector<double> oracle_phase_average(std::span<const double> values,
                                         const PhaseOracle& oracle, std::size_t S) {
    const std::size_t n = values.size();
    if (oracle.phase.size() != n) {
        throw shape_mismatch("oracle_phase_average: phase/value length mismatch");
    }
    if (n == 0) {
        throw invalid_parameter("oracle_phase_average: empty input");
    }
    if (S < 1) {
        throw invalid_parameter("oracle_phase_average: S must be positive");
    }
    for (double p : oracle.phase) {
        if (!std::isfinite(p)) {
            throw invalid_parameter("oracle_phase_average: non-finite phase");
        }
    }
    const std::size_t s_eff = std::min(S, n - 1);
    if (s_eff == 0) {
        return {values.begin(), values.end()};
    }

    // sort indices on the phase circle; equal wrapped phases form runs whose
    // member indices stay ascending
    std::vector<double> wrapped(n);
    for (std::size_t i = 0; i < n; ++i) wrapped[i] = wrap_angle(oracle.phase[i]);
    std::vector<std::int64_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::int64_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        const double wa = wrapped[static_cast<std::size_t>(a)];
        const double wb = wrapped[static_cast<std::size_t>(b)];
        return wa != wb ? wa < wb : a < b;
    });

    struct Run {
        std::size_t begin, end;
        double w;
    };
    std::vector<Run> runs;
    std::vector<std::size_t> run_of_index(n);
    for (std::size_t s = 0; s < n;) {
        std::size_t e = s + 1;
        const double w = wrapped[static_cast<std::size_t>(order[s])];
        while (e < n && wrapped[static_cast<std::size_t>(order[e])] == w) ++e;
        for (std::size_t k = s; k < e; ++k) {
            run_of_index[static_cast<std::size_t>(order[k])] = runs.size();
        }
        runs.push_back({s, e, w});
        s = e;
    }
    const std::size_t n_runs = runs.size();

    std::vector<double> out(n);
    const auto nn = static_cast<std::int64_t>(n);
    #pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t ii = 0; ii < nn; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double wi = wrapped[i];
        std::vector<std::int64_t> picked;
        picked.reserve(s_eff);

        auto run_members = [&](std::size_t rid) {
            return std::span<const std::int64_t>(order.data() + runs[rid].begin,
                                                 runs[rid].end - runs[rid].begin);
        };

        // own run first (distance zero), excluding self
        const std::size_t my_run = run_of_index[i];
        {
            std::vector<RunCursor> cs;
            cs.emplace_back(run_members(my_run), ii);
            emit_event(cs, ii, s_eff, picked);
        }

        // walk outward over the remaining runs, nearer phase first; equal
        // distances from the two sides form one event
        std::size_t remaining = n_runs - 1;
        std::size_t left = (my_run + n_runs - 1) % n_runs;
        std::size_t right = (my_run + 1) % n_runs;
        while (picked.size() < s_eff && remaining > 0) {
            std::vector<RunCursor> cs;
            if (remaining == 1 || left == right) {
                cs.emplace_back(run_members(left), ii);
                remaining = 0;
            } else {
                const double dl = circ_dist(wi, runs[left].w);
                const double dr = circ_dist(wi, runs[right].w);
                if (dl < dr) {
                    cs.emplace_back(run_members(left), ii);
                    left = (left + n_runs - 1) % n_runs;
                    --remaining;
                } else if (dr < dl) {
                    cs.emplace_back(run_members(right), ii);
                    right = (right + 1) % n_runs;
                    --remaining;
                } else {
                    cs.emplace_back(run_members(left), ii);
                    cs.emplace_back(run_members(right), ii);
                    left = (left + n_runs - 1) % n_runs;
                    right = (right + 1) % n_runs;
                    remaining -= 2;
                }
            }
            emit_event(cs, ii, s_eff - picked.size(), picked);
        }

        double acc = values[i];
        for (auto j : picked) acc += values[static_cast<std::size_t>(j)];
        out[i] = acc / static_cast<double>(1 + picked.size());
    }
    return out;
}

} // namespace qplpf
