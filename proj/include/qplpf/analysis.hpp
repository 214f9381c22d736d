#pragma once

#include <vector>

#include "qplpf/embed.hpp"

namespace qplpf {

struct PcaResult {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<double> components;           // k x dim row-major, orthonormal rows
    std::vector<double> projections;          // rows() x k row-major
    std::vector<double> explained_variance;   // k eigenvalues, non-increasing
    bool degenerate = false;                  // zero-variance input

    std::span<const double> component(std::size_t c) const {
        return {components.data() + c * dim, dim};
    }
};

/// Principal components of the mean-centered cloud via a Jacobi symmetric
/// eigensolver on the sample covariance (1/(n-1) normalization). Each
/// component's largest-magnitude entry is made positive.
PcaResult pca(const EmbeddedCloud& cloud, std::size_t k);

} // namespace qplpf
