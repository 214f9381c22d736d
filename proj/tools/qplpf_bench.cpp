// Timing comparison between the serial reference kernels and the parallel /
// indexed ones, verifying agreement on the way.
#include <chrono>
#include <cstdio>
#include <string>

#include <omp.h>

#include "qplpf/embed.hpp"
#include "qplpf/filter.hpp"
#include "qplpf/graph.hpp"
#include "qplpf/synth.hpp"

using namespace qplpf;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EmbeddedCloud random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
    EmbeddedCloud cloud;
    cloud.dim = dim;
    cloud.points.resize(n * dim);
    cloud.domain_index.resize(n);
    SplitMix64 rng(seed);
    for (auto& p : cloud.points) p = rng.next_double();
    for (std::size_t i = 0; i < n; ++i) cloud.domain_index[i] = static_cast<std::int64_t>(i);
    return cloud;
}

void bench_knn(std::size_t n, std::size_t dim, std::size_t S) {
    const auto cloud = random_cloud(n, dim, 99);

    auto t0 = std::chrono::steady_clock::now();
    const auto brute = knn_brute(cloud, S);
    const double t_brute = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto indexed = knn_indexed(cloud, S);
    const double t_indexed = seconds_since(t0);

    const bool equal = brute.neighbors == indexed.neighbors;
    std::printf("knn   n=%-6zu dim=%-3zu S=%-3zu  brute %8.3fs  indexed %8.3fs  x%-6.1f %s\n",
                n, dim, S, t_brute, t_indexed, t_brute / t_indexed,
                equal ? "outputs equal" : "OUTPUTS DIFFER");
}

void bench_average(std::size_t n, std::size_t S) {
    const auto cloud = random_cloud(n, 4, 7);
    const auto graph = knn_indexed(cloud, S);
    std::vector<double> values(cloud.points.begin(), cloud.points.begin() + static_cast<std::ptrdiff_t>(n));

    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = neighborhood_average(values, graph, cloud.domain_index);
    const double t1t = seconds_since(t0);

    omp_set_num_threads(max_threads);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = neighborhood_average(values, graph, cloud.domain_index);
    const double tnt = seconds_since(t0);

    const bool equal = serial == parallel;
    std::printf("avg   n=%-6zu S=%-3zu           1 thr %8.3fs  %2d thr  %8.3fs  x%-6.1f %s\n",
                n, S, t1t, max_threads, tnt, t1t / tnt,
                equal ? "outputs equal" : "OUTPUTS DIFFER");
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());
    bench_knn(10000, 3, 5);
    bench_knn(20000, 3, 5);
    bench_knn(5000, 8, 10);
    bench_knn(3000, 50, 10);    // high-dimension fallback path
    bench_average(2000000, 8);
    return 0;
}
