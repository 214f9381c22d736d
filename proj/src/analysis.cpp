#include "qplpf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qplpf/error.hpp"

namespace qplpf {

namespace {

// Cyclic Jacobi rotations on a symmetric matrix; returns eigenvalues on the
// diagonal and accumulates eigenvectors as columns of V. Dimensions here
// are small (m+1), so the O(d^3) sweeps are cheap and fully deterministic.
void jacobi_eigen(std::vector<double>& a, std::vector<double>& v, std::size_t d) {
    v.assign(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                s += 2.0 * a[p * d + q] * a[p * d + q];
            }
        }
        return std::sqrt(s);
    };
    double scale = 0.0;
    for (std::size_t i = 0; i < d * d; ++i) scale = std::max(scale, std::fabs(a[i]));
    if (scale == 0.0) return;

    for (int sweep = 0; sweep < 100 && off_norm() > 1e-14 * scale * d; ++sweep) {
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a[p * d + q];
                if (std::fabs(apq) <= 1e-300) continue;
                const double app = a[p * d + p];
                const double aqq = a[q * d + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a[k * d + p];
                    const double akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a[p * d + k];
                    const double aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v[k * d + p];
                    const double vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

} // namespace

PcaResult pca(const EmbeddedCloud& cloud, std::size_t k) {
    const std::size_t n = cloud.rows();
    const std::size_t d = cloud.dim;
    if (n < 2) {
        throw too_few_points("pca: need at least two points");
    }
    if (k < 1 || k > std::min(n, d)) {
        throw invalid_parameter("pca: component count out of range");
    }

    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = cloud.points.data() + r * d;
        for (std::size_t c = 0; c < d; ++c) mean[c] += row[c];
    }
    for (auto& m : mean) m /= static_cast<double>(n);

    // sample covariance, 1/(n-1)
    std::vector<double> cov(d * d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = cloud.points.data() + r * d;
        for (std::size_t i = 0; i < d; ++i) {
            const double xi = row[i] - mean[i];
            for (std::size_t j = i; j < d; ++j) {
                cov[i * d + j] += xi * (row[j] - mean[j]);
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            cov[i * d + j] /= static_cast<double>(n - 1);
            cov[j * d + i] = cov[i * d + j];
        }
    }

    PcaResult result;
    result.k = k;
    result.dim = d;
    result.components.resize(k * d);
    result.explained_variance.resize(k);
    result.projections.resize(n * k);

    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += cov[i * d + i];
    if (trace <= 0.0) {
        // zero-variance cloud: canonical basis prefix, all eigenvalues zero
        result.degenerate = true;
        std::fill(result.components.begin(), result.components.end(), 0.0);
        for (std::size_t c = 0; c < k; ++c) result.components[c * d + c] = 1.0;
        std::fill(result.explained_variance.begin(), result.explained_variance.end(), 0.0);
        std::fill(result.projections.begin(), result.projections.end(), 0.0);
        return result;
    }

    std::vector<double> vecs;
    jacobi_eigen(cov, vecs, d);

    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return cov[a * d + a] > cov[b * d + b];
    });

    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t e = idx[c];
        result.explained_variance[c] = cov[e * d + e];
        // sign rule: the largest-magnitude entry is positive
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t r = 0; r < d; ++r) {
            if (std::fabs(vecs[r * d + e]) > best) {
                best = std::fabs(vecs[r * d + e]);
                arg = r;
            }
        }
        const double sign = vecs[arg * d + e] < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < d; ++r) {
            result.components[c * d + r] = sign * vecs[r * d + e];
        }
    }

    for (std::size_t r = 0; r < n; ++r) {
        const double* row = cloud.points.data() + r * d;
        for (std::size_t c = 0; c < k; ++c) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                acc += (row[i] - mean[i]) * result.components[c * d + i];
            }
            result.projections[r * k + c] = acc;
        }
    }
    return result;
}

} // namespace qplpf
