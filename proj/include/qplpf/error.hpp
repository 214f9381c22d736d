#pragma once

#include <stdexcept>
#include <string>

namespace qplpf {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_parameter : error {
    using error::error;
};

struct domain_too_short : error {
    using error::error;
};

struct too_few_points : error {
    using error::error;
};

struct shape_mismatch : error {
    using error::error;
};

struct undefined_metric : error {
    using error::error;
};

struct degenerate_envelope : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

} // namespace qplpf
