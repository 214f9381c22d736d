#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qplpf/baselines.hpp"
#include "qplpf/error.hpp"
#include "qplpf/synth.hpp"

using namespace qplpf;

namespace {

SampleSeries make_series(std::vector<double> v, double dt = 1.0) {
    SampleSeries s;
    s.dt = dt;
    s.values = std::move(v);
    return s;
}

SampleSeries tone(double hz, double fs, std::size_t n) {
    SampleSeries s;
    s.dt = 1.0 / fs;
    s.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.values[i] = std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
    }
    return s;
}

// centered running median of odd width, truncated at the edges
std::vector<double> median_smooth(const std::vector<double>& v, std::size_t width) {
    std::vector<double> out(v.size());
    const auto n = static_cast<std::int64_t>(v.size());
    const auto w = static_cast<std::int64_t>(width);
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t lo = std::max<std::int64_t>(0, i - w / 2);
        const std::int64_t hi = std::min(n, i - w / 2 + w);
        std::vector<double> win(v.begin() + lo, v.begin() + hi);
        std::nth_element(win.begin(), win.begin() + static_cast<std::ptrdiff_t>(win.size() / 2),
                         win.end());
        out[static_cast<std::size_t>(i)] = win[win.size() / 2];
    }
    return out;
}

} // namespace

TEST_CASE("boxcar on small fixtures") {
    CHECK(boxcar(make_series({1, 2, 3}), 3).values == std::vector<double>{1.5, 2, 2.5});

    const auto c = boxcar(make_series(std::vector<double>(7, 4.5)), 5);
    CHECK(c.values == std::vector<double>(7, 4.5));

    const auto imp = boxcar(make_series({0, 0, 1, 0, 0}), 3);
    CHECK(imp.values[0] == 0.0);
    CHECK(imp.values[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(imp.values[2] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(imp.values[3] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(imp.values[4] == 0.0);
}

TEST_CASE("boxcar rejects even or oversized widths") {
    CHECK_THROWS_AS(boxcar(make_series({1, 2, 3, 4}), 2), invalid_parameter);
    CHECK_THROWS_AS(boxcar(make_series({1, 2, 3}), 5), invalid_parameter);
    CHECK_THROWS_AS(boxcar(make_series({1, 2, 3}), 0), invalid_parameter);
}

TEST_CASE("boxcar stays within the input range") {
    SampleSeries s;
    s.values = awgn(200, {1.0, 42});
    const auto out = boxcar(s, 11);
    const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
    for (double v : out.values) {
        CHECK(v >= *mn);
        CHECK(v <= *mx);
    }
}

TEST_CASE("boxcar is linear") {
    SampleSeries a, b, combo;
    a.values = awgn(80, {1.0, 51});
    b.values = awgn(80, {3.0, 52});
    combo.values.resize(80);
    for (std::size_t i = 0; i < 80; ++i) {
        combo.values[i] = 1.5 * a.values[i] - 0.25 * b.values[i];
    }
    const auto fa = boxcar(a, 7);
    const auto fb = boxcar(b, 7);
    const auto fc = boxcar(combo, 7);
    for (std::size_t i = 0; i < 80; ++i) {
        CHECK(fc.values[i] ==
              doctest::Approx(1.5 * fa.values[i] - 0.25 * fb.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("local_max_frequency hits exact integer bins") {
    const auto t5 = tone(5.0, 50.0, 50);
    const auto e5 = local_max_frequency(t5.values, 50.0);
    CHECK_FALSE(e5.fallback);
    CHECK(e5.hz == doctest::Approx(5.0).epsilon(1e-12));

    const auto t10 = tone(10.0, 50.0, 50);
    const auto e10 = local_max_frequency(t10.values, 50.0);
    CHECK(e10.hz == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("local_max_frequency degenerate windows fall back to mid-band") {
    const std::vector<double> c(50, 2.0);
    const auto e = local_max_frequency(c, 50.0);
    CHECK(e.fallback);
    CHECK(e.hz == doctest::Approx(12.5).epsilon(1e-15));

    const std::vector<double> tiny{1.0, 2.0};
    CHECK(local_max_frequency(tiny, 40.0).fallback);
    CHECK(local_max_frequency(tiny, 40.0).hz == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("adaptive_filter picks the Nyquist block for a pure tone") {
    const auto t = tone(5.0, 50.0, 500);
    const auto r = adaptive_filter(t, 50);
    for (std::size_t i = 50; i + 50 < 500; ++i) {
        CHECK(r.block[i] == 5);   // 50 / (2 * 5)
        CHECK(r.frequency[i] == doctest::Approx(5.0).epsilon(1e-12));
    }

    // with a constant 5-sample block the output matches the boxcar of width 5
    const auto b5 = boxcar(t, 5);
    for (std::size_t i = 0; i < 500; ++i) {
        if (r.block[i] == 5) {
            CHECK(r.output.values[i] == b5.values[i]);
        }
    }
}

TEST_CASE("adaptive_filter leaves constants alone") {
    const auto r = adaptive_filter(make_series(std::vector<double>(120, 3.5), 0.02), 50);
    CHECK(r.output.values == std::vector<double>(120, 3.5));
}

TEST_CASE("adaptive_filter tracks the chirp's rising frequency") {
    const auto s = lfm_chirp();
    const auto r = adaptive_filter(s, 50);
    CHECK(r.output.values.size() == 501);

    // median-smoothed estimates over the fully-covered interior rise
    // monotonically; block sizes shrink accordingly
    const auto f_smooth = median_smooth(r.frequency, 25);
    std::vector<double> b_double(r.block.begin(), r.block.end());
    const auto b_smooth = median_smooth(b_double, 25);
    for (std::size_t i = 26; i + 26 < f_smooth.size(); ++i) {
        CHECK(f_smooth[i + 1] >= f_smooth[i] - 1e-12);
        CHECK(b_smooth[i + 1] <= b_smooth[i] + 1e-12);
    }
}

TEST_CASE("adaptive_filter validates the estimation window") {
    CHECK_THROWS_AS(adaptive_filter(make_series({1, 2, 3}), 4), invalid_parameter);
    CHECK_THROWS_AS(adaptive_filter(make_series({1, 2, 3}), 0), invalid_parameter);
}
