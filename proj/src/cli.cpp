#include "qplpf/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "qplpf/analysis.hpp"
#include "qplpf/baselines.hpp"
#include "qplpf/error.hpp"
#include "qplpf/filter.hpp"
#include "qplpf/io.hpp"
#include "qplpf/metrics.hpp"
#include "qplpf/sweep.hpp"
#include "qplpf/synth.hpp"

namespace qplpf::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

bool is_pgm(const fs::path& p) {
    return p.extension() == ".pgm";
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

// --config FILE holds a flat JSON object of long-option values. Its pairs
// are injected as tokens before the explicit flags, so the command line
// always wins (CLI11 keeps the last occurrence).
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) {
        throw io_error("cannot open config: " + config_path);
    }
    json j;
    in >> j;
    if (!j.is_object()) {
        throw io_error("config must be a JSON object: " + config_path);
    }

    std::vector<std::string> tokens;
    for (const auto& [key, value] : j.items()) {
        // explicit command-line flags win over config values
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
            continue;
        }
        tokens.push_back(flag);
        if (value.is_string()) {
            tokens.push_back(value.get<std::string>());
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& e : value) {
                if (!joined.empty()) joined += ',';
                joined += e.is_string() ? e.get<std::string>() : e.dump();
            }
            tokens.push_back(joined);
        } else {
            tokens.push_back(value.dump());
        }
    }
    // insert after the subcommand name (args[1]) when present
    const std::size_t at = args.size() >= 2 ? 2 : args.size();
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), tokens.begin(), tokens.end());
    return args;
}

void write_json(const fs::path& path, const json& j) {
    atomic_write_text(path, j.dump(2) + "\n");
}

json flagged_to_json(const std::vector<std::int64_t>& flagged) {
    json arr = json::array();
    for (auto i : flagged) arr.push_back(i);
    return arr;
}

// ---- synth ----

struct SynthOptions {
    std::string kind;
    double fs = 50.0;
    double t_end = 10.0;
    std::size_t period = 50;
    std::size_t n_periods = 10;
    int width = 100;
    int height = 100;
    double a = 0.05;
    double b = 0.03;
    double c = 0.0005;
    double snr_db = 0.0;
    bool has_snr = false;
    std::uint64_t seed = 1;
    std::string out;
};

int run_synth(const SynthOptions& opt) {
    json sidecar;
    sidecar["command"] = "synth";
    sidecar["kind"] = opt.kind;
    sidecar["seed"] = opt.seed;

    if (opt.kind == "image") {
        GridImage img = warped_sine_image(opt.width, opt.height, opt.a, opt.b, opt.c);
        sidecar["width"] = opt.width;
        sidecar["height"] = opt.height;
        sidecar["a"] = opt.a;
        sidecar["b"] = opt.b;
        sidecar["c"] = opt.c;
        double sigma = 0.0;
        if (opt.has_snr) {
            sigma = snr_to_sigma(opt.snr_db, mean_power(img.values));
            const auto noise = awgn(img.values.size(), {sigma, opt.seed});
            for (std::size_t i = 0; i < img.values.size(); ++i) img.values[i] += noise[i];
            sidecar["snr_db"] = opt.snr_db;
        }
        sidecar["sigma"] = sigma;
        const auto map = write_image_pgm(opt.out, img);
        sidecar["format"] = "pgm16";
        sidecar["value_min"] = map.vmin;
        sidecar["value_max"] = map.vmax;
        write_json(opt.out + ".json", sidecar);
        return 0;
    }

    SampleSeries series;
    if (opt.kind == "chirp") {
        series = lfm_chirp(opt.fs, opt.t_end);
        sidecar["fs"] = opt.fs;
        sidecar["t_end"] = opt.t_end;
    } else if (opt.kind == "sine") {
        series = periodic_sine(opt.period, opt.n_periods);
        sidecar["period"] = opt.period;
        sidecar["n_periods"] = opt.n_periods;
    } else {
        throw invalid_parameter("synth: unknown kind '" + opt.kind + "'");
    }
    double sigma = 0.0;
    if (opt.has_snr) {
        sigma = snr_to_sigma(opt.snr_db, mean_power(series.values));
        const auto noise = awgn(series.values.size(), {sigma, opt.seed});
        for (std::size_t i = 0; i < series.values.size(); ++i) series.values[i] += noise[i];
        sidecar["snr_db"] = opt.snr_db;
    }
    sidecar["sigma"] = sigma;
    sidecar["n"] = series.values.size();
    write_series_csv(opt.out, series);
    write_json(opt.out + ".json", sidecar);
    return 0;
}

// ---- filter ----

struct FilterOptions {
    std::string in;
    std::string out;
    std::string method = "qplpf";
    std::size_t m = 49;
    int m_window = 10;
    std::size_t s = 10;
    std::size_t window = 11;
    std::size_t est_window = 50;
    std::string phase;
    std::string dump_graph;
};

void dump_graph_file(const fs::path& path, const NeighborGraph& graph) {
    std::string out;
    for (std::size_t v = 0; v < graph.neighbors.size(); ++v) {
        out += std::to_string(v);
        out += ':';
        for (auto n : graph.neighbors[v]) {
            out += ' ';
            out += std::to_string(n);
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

int run_filter(const FilterOptions& opt) {
    json report;
    report["command"] = "filter";
    report["input"] = opt.in;
    report["output"] = opt.out;
    report["method"] = opt.method;
    const auto t0 = std::chrono::steady_clock::now();

    if (is_pgm(opt.in)) {
        if (opt.method != "qplpf") {
            throw invalid_parameter("filter: only the qplpf method supports images");
        }
        const GridImage img = read_image_pgm(opt.in);
        PipelineDetail detail;
        auto result = qplpf_image(img, opt.m_window, opt.s, MetricKind::Euclidean,
                                  opt.dump_graph.empty() ? nullptr : &detail);
        if (!opt.dump_graph.empty()) dump_graph_file(opt.dump_graph, detail.graph);
        const auto map = write_image_pgm(opt.out, result.output);
        report["m_window"] = opt.m_window;
        report["s"] = opt.s;
        report["s_clipped"] = result.s_clipped;
        report["flagged_count"] = result.flagged.size();
        report["flagged_indices"] = flagged_to_json(result.flagged);
        report["value_min"] = map.vmin;
        report["value_max"] = map.vmax;
    } else {
        const SampleSeries series = read_series_csv(opt.in);
        SampleSeries output;
        std::vector<std::int64_t> flagged;
        if (opt.method == "qplpf") {
            PipelineDetail detail;
            auto result = qplpf_series(series, opt.m, opt.s, MetricKind::Euclidean,
                                       opt.dump_graph.empty() ? nullptr : &detail);
            if (!opt.dump_graph.empty()) dump_graph_file(opt.dump_graph, detail.graph);
            output = std::move(result.output);
            flagged = std::move(result.flagged);
            report["m"] = opt.m;
            report["s"] = opt.s;
            report["s_clipped"] = result.s_clipped;
        } else if (opt.method == "boxcar") {
            output = boxcar(series, opt.window);
            report["window"] = opt.window;
        } else if (opt.method == "adaptive") {
            output = adaptive_filter(series, opt.est_window).output;
            report["est_window"] = opt.est_window;
        } else if (opt.method == "oracle") {
            if (opt.phase.empty()) {
                throw invalid_parameter("filter: oracle method needs --phase");
            }
            const SampleSeries phase_series = read_series_csv(opt.phase);
            PhaseOracle oracle{phase_series.values};
            output.start_time = series.start_time;
            output.dt = series.dt;
            output.values = oracle_phase_average(series.values, oracle, opt.s);
            report["phase"] = opt.phase;
            report["s"] = opt.s;
        } else {
            throw invalid_parameter("filter: unknown method '" + opt.method + "'");
        }
        write_series_csv(opt.out, output);
        report["flagged_count"] = flagged.size();
        report["flagged_indices"] = flagged_to_json(flagged);
    }

    const auto t1 = std::chrono::steady_clock::now();
    report["wall_seconds"] = std::chrono::duration<double>(t1 - t0).count();
    write_json(opt.out + ".json", report);
    return 0;
}

// ---- sweep ----

struct SweepOptions {
    SweepConfig config;
    std::string methods = "qplpf,boxcar,adaptive,oracle";
    std::string out_dir;
};

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "snr_db,method,median,q25,q75\n";
    for (const auto& r : rows) {
        out += format_double(r.snr_db);
        out += ',';
        out += r.method;
        out += ',';
        out += format_double(r.median);
        out += ',';
        out += format_double(r.q25);
        out += ',';
        out += format_double(r.q75);
        out += '\n';
    }
    return out;
}

std::vector<SvgSeries> sweep_svg_series(const std::vector<SweepRow>& rows,
                                        const std::vector<std::string>& methods) {
    std::vector<SvgSeries> out;
    for (const auto& m : methods) {
        SvgSeries s;
        s.name = m;
        for (const auto& r : rows) {
            if (r.method == m) {
                s.x.push_back(r.snr_db);
                s.y.push_back(r.median);
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

int run_sweep_cmd(SweepOptions& opt) {
    opt.config.methods = split_csv_list(opt.methods);
    const SweepResult result = run_sweep(opt.config);

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    atomic_write_text(dir / "rms_vs_snr.csv", sweep_csv(result.rms));
    atomic_write_text(dir / "envelope_vs_snr.csv", sweep_csv(result.envelope));
    atomic_write_text(dir / "rms_vs_snr.svg",
                      render_line_svg("RMS recovery error vs SNR", "SNR (dB)", "RMS error",
                                      sweep_svg_series(result.rms, opt.config.methods)));
    atomic_write_text(dir / "envelope_vs_snr.svg",
                      render_line_svg("Envelope variability vs SNR", "SNR (dB)",
                                      "RMS envelope variability",
                                      sweep_svg_series(result.envelope, opt.config.methods)));
    return 0;
}

// ---- pca ----

struct PcaOptions {
    std::string in;
    std::string out;
    std::size_t m = 49;
    std::size_t k = 4;
};

int run_pca(const PcaOptions& opt) {
    if (is_pgm(opt.in)) {
        throw invalid_parameter("pca: expects a series CSV input");
    }
    const SampleSeries series = read_series_csv(opt.in);
    const EmbeddedCloud cloud = embed_series(series, consecutive_delays(opt.m));
    const PcaResult result = pca(cloud, opt.k);

    std::string out;
    for (std::size_t c = 0; c < result.k; ++c) {
        if (c) out += ',';
        out += "pc" + std::to_string(c + 1);
    }
    out += '\n';
    for (std::size_t r = 0; r < cloud.rows(); ++r) {
        for (std::size_t c = 0; c < result.k; ++c) {
            if (c) out += ',';
            out += format_double(result.projections[r * result.k + c]);
        }
        out += '\n';
    }
    atomic_write_text(opt.out, out);

    json sidecar;
    sidecar["command"] = "pca";
    sidecar["input"] = opt.in;
    sidecar["m"] = opt.m;
    sidecar["k"] = opt.k;
    sidecar["explained_variance"] = result.explained_variance;
    sidecar["degenerate"] = result.degenerate;
    write_json(opt.out + ".json", sidecar);
    return 0;
}

// ---- spectrum ----

struct SpectrumOptions {
    std::string in;
    std::string out;
};

int run_spectrum(const SpectrumOptions& opt) {
    const GridImage img = read_image_pgm(opt.in);
    GridImage spec = spectrum2d(img);
    for (auto& v : spec.values) v = std::log10(1.0 + v);
    const auto map = write_image_pgm(opt.out, spec);

    json sidecar;
    sidecar["command"] = "spectrum";
    sidecar["input"] = opt.in;
    sidecar["scale"] = "log10(1+magnitude)";
    sidecar["format"] = "pgm16";
    sidecar["value_min"] = map.vmin;
    sidecar["value_max"] = map.vmax;
    write_json(opt.out + ".json", sidecar);
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    // QPLPF_THREADS caps OpenMP parallelism for every subcommand
    if (const char* env = std::getenv("QPLPF_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
    }

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = apply_config(std::move(args));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"Quasiperiodic low pass filter toolkit"};
    app.require_subcommand(1);

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Generate a test signal or image");
    synth->add_option("kind", synth_opt.kind, "chirp, sine, or image")->required();
    synth->add_option("--fs", synth_opt.fs, "sample rate, Hz (chirp)");
    synth->add_option("--t-end", synth_opt.t_end, "duration, seconds (chirp)");
    synth->add_option("--period", synth_opt.period, "period in samples (sine)");
    synth->add_option("--n-periods", synth_opt.n_periods, "number of periods (sine)");
    synth->add_option("--width", synth_opt.width, "image width (image)");
    synth->add_option("--height", synth_opt.height, "image height (image)");
    synth->add_option("--a", synth_opt.a, "x frequency (image)");
    synth->add_option("--b", synth_opt.b, "y frequency (image)");
    synth->add_option("--c", synth_opt.c, "quadratic phase warp (image)");
    auto* snr_flag = synth->add_option("--snr-db", synth_opt.snr_db, "add noise at this SNR");
    synth->add_option("--seed", synth_opt.seed, "noise seed");
    synth->add_option("--out", synth_opt.out, "output path (.csv or .pgm)")->required();

    FilterOptions filter_opt;
    auto* filter = app.add_subcommand("filter", "Run a filter over a series or image");
    filter->add_option("--in", filter_opt.in, "input path")->required();
    filter->add_option("--out", filter_opt.out, "output path")->required();
    filter->add_option("--method", filter_opt.method, "qplpf, boxcar, adaptive, or oracle");
    filter->add_option("--m", filter_opt.m, "delay count (series qplpf)");
    filter->add_option("--m-window", filter_opt.m_window, "matching window side (image qplpf)");
    filter->add_option("--s", filter_opt.s, "neighborhood size (qplpf, oracle)");
    filter->add_option("--window", filter_opt.window, "boxcar width (odd)");
    filter->add_option("--est-window", filter_opt.est_window, "adaptive estimation window");
    filter->add_option("--phase", filter_opt.phase, "phase CSV for the oracle method");
    filter->add_option("--dump-graph", filter_opt.dump_graph, "write 'vertex: n1 n2 ...' lines");

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo filter comparison on the chirp");
    sweep->add_option("--snr-min", sweep_opt.config.snr_min, "lowest SNR, dB");
    sweep->add_option("--snr-max", sweep_opt.config.snr_max, "highest SNR, dB");
    sweep->add_option("--snr-step", sweep_opt.config.snr_step, "SNR step, dB");
    sweep->add_option("--trials", sweep_opt.config.trials, "trials per SNR point");
    sweep->add_option("--seed", sweep_opt.config.seed, "base seed (trial t uses seed+t)");
    sweep->add_option("--methods", sweep_opt.methods, "comma list of methods");
    sweep->add_option("--m", sweep_opt.config.qplpf_m, "qplpf delay count");
    sweep->add_option("--s", sweep_opt.config.qplpf_s, "qplpf neighborhood size");
    sweep->add_option("--window", sweep_opt.config.boxcar_k, "boxcar width");
    sweep->add_option("--est-window", sweep_opt.config.est_window, "adaptive estimation window");
    sweep->add_option("--oracle-s", sweep_opt.config.oracle_s, "oracle neighborhood size");
    sweep->add_option("--fs", sweep_opt.config.fs, "chirp sample rate");
    sweep->add_option("--t-end", sweep_opt.config.t_end, "chirp duration");
    sweep->add_option("--out-dir", sweep_opt.out_dir, "output directory")->required();

    PcaOptions pca_opt;
    auto* pca_cmd = app.add_subcommand("pca", "Project the delay embedding onto principal components");
    pca_cmd->add_option("--in", pca_opt.in, "series CSV input")->required();
    pca_cmd->add_option("--m", pca_opt.m, "delay count");
    pca_cmd->add_option("--k", pca_opt.k, "number of components");
    pca_cmd->add_option("--out", pca_opt.out, "projection CSV output")->required();

    SpectrumOptions spec_opt;
    auto* spectrum = app.add_subcommand("spectrum", "Centered 2-D spectrum of an image");
    spectrum->add_option("--in", spec_opt.in, "PGM input")->required();
    spectrum->add_option("--out", spec_opt.out, "PGM output")->required();

    std::vector<const char*> cargs;
    cargs.reserve(args.size());
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    synth_opt.has_snr = snr_flag->count() > 0;
    try {
        if (synth->parsed()) return run_synth(synth_opt);
        if (filter->parsed()) return run_filter(filter_opt);
        if (sweep->parsed()) return run_sweep_cmd(sweep_opt);
        if (pca_cmd->parsed()) return run_pca(pca_opt);
        if (spectrum->parsed()) return run_spectrum(spec_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}

} // namespace qplpf::cli
