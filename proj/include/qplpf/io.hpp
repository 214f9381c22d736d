#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qplpf/types.hpp"

namespace qplpf {

/// Series CSV: header "t,value", one row per sample, 17 significant digits
/// (round-trip safe for doubles).
void write_series_csv(const std::filesystem::path& path, const SampleSeries& series);
SampleSeries read_series_csv(const std::filesystem::path& path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian). Float values map
/// affinely onto [0, 65535]; the map is recorded in a "<path>.json"
/// sidecar so reading restores the original range. P2 is accepted on read.
struct PgmValueMap {
    double vmin = 0.0;
    double vmax = 1.0;
};
PgmValueMap write_image_pgm(const std::filesystem::path& path, const GridImage& image);
GridImage read_image_pgm(const std::filesystem::path& path);

/// Write content to path via a temp file + rename, so readers never see a
/// partial file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);
void atomic_write_binary(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);   // %.17g

/// Minimal SVG line chart: one polyline per named series over a common x axis.
struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};
std::string render_line_svg(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<SvgSeries>& series);

} // namespace qplpf
