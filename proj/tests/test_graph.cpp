#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

#include "qplpf/embed.hpp"
#include "qplpf/error.hpp"
#include "qplpf/graph.hpp"
#include "qplpf/synth.hpp"

using namespace qplpf;

namespace {

EmbeddedCloud cloud_from_points(const std::vector<std::vector<double>>& pts) {
    EmbeddedCloud cloud;
    cloud.dim = pts.front().size();
    cloud.domain_index.resize(pts.size());
    cloud.points.reserve(pts.size() * cloud.dim);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cloud.domain_index[i] = static_cast<std::int64_t>(i);
        for (double v : pts[i]) cloud.points.push_back(v);
    }
    return cloud;
}

EmbeddedCloud random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
    EmbeddedCloud cloud;
    cloud.dim = dim;
    cloud.points.resize(n * dim);
    cloud.domain_index.resize(n);
    SplitMix64 rng(seed);
    for (auto& p : cloud.points) p = rng.next_double();
    std::iota(cloud.domain_index.begin(), cloud.domain_index.end(), 0);
    return cloud;
}

// Plain full-sort selection, written independently of the library kernels:
// the oracle both implementations are held to.
std::vector<std::vector<std::int32_t>> ref_knn(const EmbeddedCloud& cloud, std::size_t S) {
    const std::size_t n = cloud.rows();
    std::vector<std::vector<std::int32_t>> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::pair<double, std::int32_t>> all;
        for (std::size_t w = 0; w < n; ++w) {
            if (w == v) continue;
            double d2 = 0.0;
            for (std::size_t k = 0; k < cloud.dim; ++k) {
                const double d = cloud.points[v * cloud.dim + k] - cloud.points[w * cloud.dim + k];
                d2 += d * d;
            }
            all.emplace_back(d2, static_cast<std::int32_t>(w));
        }
        std::sort(all.begin(), all.end());
        const std::size_t s = std::min(S, all.size());
        for (std::size_t i = 0; i < s; ++i) out[v].push_back(all[i].second);
    }
    return out;
}

} // namespace

TEST_CASE("knn_brute on three points of a line") {
    const auto cloud = cloud_from_points({{0.0}, {0.1}, {1.0}});
    const auto g = knn_brute(cloud, 1);
    CHECK(g.S == 1);
    CHECK_FALSE(g.s_clipped);
    CHECK(g.neighbors == std::vector<std::vector<std::int32_t>>{{1}, {0}, {1}});
}

TEST_CASE("knn complete graph when S = n-1") {
    const auto cloud = random_cloud(8, 3, 2);
    const auto g = knn_brute(cloud, 7);
    for (std::size_t v = 0; v < 8; ++v) {
        auto sorted = g.neighbors[v];
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::int32_t> expected;
        for (std::int32_t w = 0; w < 8; ++w) {
            if (w != static_cast<std::int32_t>(v)) expected.push_back(w);
        }
        CHECK(sorted == expected);
    }
}

TEST_CASE("distance ties break toward the smaller id") {
    const auto cloud = cloud_from_points({{0, 0}, {0, 0}, {5, 5}});
    const auto g = knn_brute(cloud, 1);
    CHECK(g.neighbors == std::vector<std::vector<std::int32_t>>{{1}, {0}, {0}});
}

TEST_CASE("knn error paths") {
    const auto one = cloud_from_points({{1.0}});
    CHECK_THROWS_AS(knn_brute(one, 1), too_few_points);
    CHECK_THROWS_AS(knn_brute(random_cloud(5, 2, 1), 0), invalid_parameter);

    const auto g = knn_brute(random_cloud(5, 2, 1), 9);
    CHECK(g.s_clipped);
    CHECK(g.S == 4);
    for (const auto& nb : g.neighbors) CHECK(nb.size() == 4);
}

TEST_CASE("knn_brute equals the full-sort reference") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto cloud = random_cloud(120, 4, seed);
        const auto ref = ref_knn(cloud, 6);
        CHECK(knn_brute(cloud, 6).neighbors == ref);
    }
}

TEST_CASE("knn_indexed equals knn_brute") {
    SUBCASE("across dimensions and S") {
        for (std::size_t dim : {2u, 3u, 5u, 7u}) {
            for (std::size_t S : {1u, 5u, 15u}) {
                const auto cloud = random_cloud(200, dim, 10 * dim + S);
                CHECK(knn_indexed(cloud, S).neighbors == knn_brute(cloud, S).neighbors);
            }
        }
    }
    SUBCASE("high dimension takes the fallback path") {
        const auto cloud = random_cloud(150, 40, 5);
        CHECK(knn_indexed(cloud, 7).neighbors == knn_brute(cloud, 7).neighbors);
    }
    SUBCASE("duplicate-heavy cloud with massive distance ties") {
        // integer grid coordinates create many exact ties
        auto cloud = random_cloud(300, 3, 8);
        for (auto& p : cloud.points) p = std::floor(p * 3.0);
        CHECK(knn_indexed(cloud, 5).neighbors == knn_brute(cloud, 5).neighbors);
        CHECK(knn_brute(cloud, 5).neighbors == ref_knn(cloud, 5));
    }
    SUBCASE("embedded periodic sine has whole classes at distance zero") {
        const auto s = periodic_sine(50, 10);
        const auto cloud = embed_series(s, consecutive_delays(3));
        CHECK(knn_indexed(cloud, 9).neighbors == knn_brute(cloud, 9).neighbors);
    }
}

TEST_CASE("neighbor lists are invariant under positive scaling") {
    const auto cloud = random_cloud(150, 4, 21);
    auto scaled = cloud;
    for (auto& p : scaled.points) p *= 3.7;
    CHECK(knn_brute(cloud, 5).neighbors == knn_brute(scaled, 5).neighbors);
}

TEST_CASE("relabeling vertices permutes neighbor lists consistently") {
    const std::size_t n = 60;
    const auto cloud = random_cloud(n, 3, 33);   // random reals: ties have probability ~0
    const auto base = knn_brute(cloud, 4);

    // reverse the vertex order
    EmbeddedCloud rev;
    rev.dim = cloud.dim;
    rev.points.resize(cloud.points.size());
    rev.domain_index.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rev.domain_index[i] = static_cast<std::int64_t>(i);
        for (std::size_t k = 0; k < cloud.dim; ++k) {
            rev.points[i * cloud.dim + k] = cloud.points[(n - 1 - i) * cloud.dim + k];
        }
    }
    const auto mapped = knn_brute(rev, 4);
    for (std::size_t v = 0; v < n; ++v) {
        auto expected = base.neighbors[n - 1 - v];
        for (auto& w : expected) w = static_cast<std::int32_t>(n) - 1 - w;
        std::sort(expected.begin(), expected.end());
        auto got = mapped.neighbors[v];
        std::sort(got.begin(), got.end());
        CHECK(got == expected);
    }
}

TEST_CASE("indexed search beats the serial scan on a large 3-D cloud") {
    const auto cloud = random_cloud(10000, 3, 77);

    const auto t0 = std::chrono::steady_clock::now();
    const auto brute = knn_brute(cloud, 5);
    const auto t1 = std::chrono::steady_clock::now();
    const auto indexed = knn_indexed(cloud, 5);
    const auto t2 = std::chrono::steady_clock::now();

    CHECK(indexed.neighbors == brute.neighbors);
    const double brute_s = std::chrono::duration<double>(t1 - t0).count();
    const double indexed_s = std::chrono::duration<double>(t2 - t1).count();
    CHECK(indexed_s < brute_s);
}
