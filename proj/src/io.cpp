#include "qplpf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qplpf/error.hpp"

namespace qplpf {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_binary(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw io_error("cannot open for writing: " + tmp);
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw io_error("write failed: " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw io_error("rename failed: " + path.string() + " (" + ec.message() + ")");
    }
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    atomic_write_binary(path, content);
}

void write_series_csv(const std::filesystem::path& path, const SampleSeries& series) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out += format_double(series.time_at(i));
        out += ',';
        out += format_double(series.values[i]);
        out += '\n';
    }
    atomic_write_text(path, out);
}

SampleSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw io_error("empty CSV: " + path.string());
    }
    SampleSeries s;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw io_error("malformed CSV row in " + path.string());
        }
        char* end = nullptr;
        const double t = std::strtod(line.c_str(), &end);
        const double v = std::strtod(line.c_str() + comma + 1, &end);
        times.push_back(t);
        s.values.push_back(v);
    }
    if (s.values.empty()) {
        throw io_error("CSV has no samples: " + path.string());
    }
    s.start_time = times.front();
    s.dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    if (s.dt <= 0.0) s.dt = 1.0;
    return s;
}

namespace {

constexpr int kPgmMax = 65535;

nlohmann::ordered_json read_sidecar(const std::filesystem::path& path) {
    const auto sidecar = std::filesystem::path(path.string() + ".json");
    if (!std::filesystem::exists(sidecar)) return {};
    std::ifstream in(sidecar);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        return {};
    }
    return j;
}

} // namespace

PgmValueMap write_image_pgm(const std::filesystem::path& path, const GridImage& image) {
    if (image.width < 1 || image.height < 1 ||
        image.values.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw invalid_parameter("write_image_pgm: malformed image");
    }
    PgmValueMap map;
    const auto [mn, mx] = std::minmax_element(image.values.begin(), image.values.end());
    map.vmin = *mn;
    map.vmax = *mx;
    const double span = map.vmax - map.vmin;

    std::string out = "P5\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n" + std::to_string(kPgmMax) + "\n";
    out.reserve(out.size() + image.values.size() * 2);
    for (double v : image.values) {
        const double unit = span > 0.0 ? (v - map.vmin) / span : 0.0;
        const auto code = static_cast<int>(std::lround(unit * kPgmMax));
        out += static_cast<char>((code >> 8) & 0xFF);
        out += static_cast<char>(code & 0xFF);
    }
    atomic_write_binary(path, out);

    nlohmann::ordered_json j;
    j["format"] = "pgm16";
    j["width"] = image.width;
    j["height"] = image.height;
    j["value_min"] = map.vmin;
    j["value_max"] = map.vmax;
    atomic_write_text(path.string() + ".json", j.dump(2) + "\n");
    return map;
}

GridImage read_image_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open: " + path.string());
    }
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P2") {
        throw io_error("not a PGM file: " + path.string());
    }
    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw io_error("truncated PGM header: " + path.string());
    };
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (width < 1 || height < 1 || maxval < 1 || maxval > kPgmMax) {
        throw io_error("bad PGM header: " + path.string());
    }

    GridImage img;
    img.width = width;
    img.height = height;
    img.values.resize(static_cast<std::size_t>(width) * height);

    if (magic == "P2") {
        for (auto& v : img.values) {
            long code = 0;
            if (!(in >> code)) {
                throw io_error("truncated P2 data: " + path.string());
            }
            v = static_cast<double>(code);
        }
    } else {
        in.get();   // single whitespace after maxval
        const bool wide = maxval > 255;
        const std::size_t bytes = img.values.size() * (wide ? 2 : 1);
        std::string raw(bytes, '\0');
        in.read(raw.data(), static_cast<std::streamsize>(bytes));
        if (in.gcount() != static_cast<std::streamsize>(bytes)) {
            throw io_error("truncated P5 data: " + path.string());
        }
        for (std::size_t i = 0; i < img.values.size(); ++i) {
            if (wide) {
                const auto hi = static_cast<unsigned char>(raw[2 * i]);
                const auto lo = static_cast<unsigned char>(raw[2 * i + 1]);
                img.values[i] = static_cast<double>((hi << 8) | lo);
            } else {
                img.values[i] = static_cast<double>(static_cast<unsigned char>(raw[i]));
            }
        }
    }

    // restore the original float range if a sidecar recorded it
    const auto sidecar = read_sidecar(path);
    if (sidecar.contains("value_min") && sidecar.contains("value_max")) {
        const double vmin = sidecar["value_min"].get<double>();
        const double vmax = sidecar["value_max"].get<double>();
        const double span = vmax - vmin;
        for (auto& v : img.values) {
            v = vmin + (span > 0.0 ? v / maxval * span : 0.0);
        }
    }
    return img;
}

namespace {

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};

} // namespace

std::string render_line_svg(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<SvgSeries>& series) {
    constexpr double W = 800, H = 500;
    constexpr double L = 70, R = 160, T = 50, B = 55;   // margins (legend on the right)

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
        << title << "</text>\n";

    // axes with 5 ticks per side
    svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
        << H - B << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        svg << "<line x1=\"" << px(fx) << "\" y1=\"" << H - B << "\" x2=\"" << px(fx)
            << "\" y2=\"" << H - B + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(fx) << "\" y=\"" << H - B + 20
            << "\" text-anchor=\"middle\" font-size=\"12\">" << svg_num(fx) << "</text>\n";
        svg << "<line x1=\"" << L - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << L << "\" y2=\""
            << py(fy) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << L - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << svg_num(fy) << "</text>\n";
    }
    svg << "<text x=\"" << (L + (W - R)) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (T + (H - B)) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << (T + (H - B)) / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            svg << svg_num(px(series[s].x[i])) << "," << svg_num(py(series[s].y[i])) << " ";
        }
        svg << "\"/>\n";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            svg << "<circle cx=\"" << svg_num(px(series[s].x[i])) << "\" cy=\""
                << svg_num(py(series[s].y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = T + 20.0 * static_cast<double>(s);
        svg << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 45
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << W - R + 52 << "\" y=\"" << ly + 4 << "\" font-size=\"13\">"
            << series[s].name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace qplpf
