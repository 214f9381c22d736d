#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "qplpf/embed.hpp"
#include "qplpf/error.hpp"
#include "qplpf/synth.hpp"

using namespace qplpf;

namespace {

SampleSeries make_series(std::vector<double> v) {
    SampleSeries s;
    s.values = std::move(v);
    return s;
}

} // namespace

TEST_CASE("consecutive_delays") {
    CHECK(consecutive_delays(3).offsets == std::vector<std::int64_t>{1, 2, 3});
    CHECK(consecutive_delays(1).offsets == std::vector<std::int64_t>{1});
    CHECK(consecutive_delays(49).m() == 49);   // a 50-sample matching window
    CHECK_THROWS_AS(consecutive_delays(0), invalid_parameter);
}

TEST_CASE("square_window_offsets") {
    CHECK(square_window_offsets(1).offsets.empty());
    const auto w2 = square_window_offsets(2);
    REQUIRE(w2.m() == 3);
    CHECK(w2.offsets[0] == PixelOffset{1, 0});
    CHECK(w2.offsets[1] == PixelOffset{0, 1});
    CHECK(w2.offsets[2] == PixelOffset{1, 1});
    CHECK(square_window_offsets(10).m() == 99);
    CHECK_THROWS_AS(square_window_offsets(0), invalid_parameter);
}

TEST_CASE("embed_series basic rows") {
    const auto s = make_series({1, 2, 3, 4, 5});
    const auto cloud = embed_series(s, DelaySet{{1, 2}});
    REQUIRE(cloud.rows() == 3);
    REQUIRE(cloud.dim == 3);
    CHECK(cloud.domain_index == std::vector<std::int64_t>{0, 1, 2});
    const double expected[3][3] = {{1, 2, 3}, {2, 3, 4}, {3, 4, 5}};
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(cloud.row(r)[c] == expected[r][c]);
        }
    }
}

TEST_CASE("embed_series with no delays is the identity coordinate") {
    const auto cloud = embed_series(make_series({7}), DelaySet{});
    REQUIRE(cloud.rows() == 1);
    CHECK(cloud.dim == 1);
    CHECK(cloud.row(0)[0] == 7.0);
    CHECK(cloud.domain_index == std::vector<std::int64_t>{0});
}

TEST_CASE("quarter-period delay of a sine lands on the unit circle") {
    SampleSeries s;
    s.values.resize(400);
    for (std::size_t i = 0; i < 400; ++i) {
        s.values[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 100.0);
    }
    const auto cloud = embed_series(s, DelaySet{{25}});
    REQUIRE(cloud.rows() == 375);
    for (std::size_t r = 0; r < cloud.rows(); ++r) {
        const double x = cloud.row(r)[0];
        const double y = cloud.row(r)[1];
        CHECK(std::fabs(x * x + y * y - 1.0) <= 1e-9);
    }
}

TEST_CASE("embed_series errors and determinism") {
    CHECK_THROWS_AS(embed_series(make_series({1, 2, 3}), DelaySet{{3}}), domain_too_short);
    CHECK_THROWS_AS(embed_series(make_series({}), DelaySet{{1}}), invalid_parameter);
    CHECK_THROWS_AS(embed_series(make_series({1, 2, 3}), DelaySet{{0}}), invalid_parameter);
    CHECK_THROWS_AS(embed_series(make_series({1, 2, 3, 4}), DelaySet{{1, 1}}), invalid_parameter);

    const auto s = lfm_chirp();
    const auto a = embed_series(s, consecutive_delays(7));
    const auto b = embed_series(s, consecutive_delays(7));
    CHECK(a.points == b.points);
    CHECK(a.domain_index == b.domain_index);
}

TEST_CASE("embed_series row count and coordinate-0 identity") {
    for (std::size_t m : {1u, 5u, 12u}) {
        SampleSeries s;
        s.values = awgn(97, {1.0, 11 + m});
        const auto cloud = embed_series(s, consecutive_delays(m));
        CHECK(cloud.rows() == 97 - m);
        for (std::size_t r = 0; r < cloud.rows(); ++r) {
            CHECK(cloud.row(r)[0] == s.values[static_cast<std::size_t>(cloud.domain_index[r])]);
        }
    }
}

TEST_CASE("embed_image enumerates windows in offset order") {
    GridImage img;
    img.width = 2;
    img.height = 2;
    img.values = {1, 2, 3, 4};
    const auto cloud = embed_image(img, square_window_offsets(2));
    REQUIRE(cloud.rows() == 1);
    REQUIRE(cloud.dim == 4);
    CHECK(cloud.domain_index[0] == 0);
    CHECK(cloud.row(0)[0] == 1.0);
    CHECK(cloud.row(0)[1] == 2.0);
    CHECK(cloud.row(0)[2] == 3.0);
    CHECK(cloud.row(0)[3] == 4.0);
}

TEST_CASE("embed_image of a ramp") {
    // v(x, y) = x + 3y over a 3x3 grid
    GridImage img;
    img.width = 3;
    img.height = 3;
    img.values.resize(9);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 3; ++x) img.at(x, y) = x + 3 * y;
    }
    const auto cloud = embed_image(img, square_window_offsets(2));
    REQUIRE(cloud.rows() == 4);
    for (std::size_t r = 0; r < 4; ++r) {
        const double v = cloud.row(r)[0];
        CHECK(cloud.row(r)[1] == v + 1);
        CHECK(cloud.row(r)[2] == v + 3);
        CHECK(cloud.row(r)[3] == v + 4);
    }
}

TEST_CASE("embed_image constant input gives identical rows") {
    GridImage img;
    img.width = 5;
    img.height = 4;
    img.values.assign(20, 2.5);
    const auto cloud = embed_image(img, square_window_offsets(3));
    CHECK(cloud.rows() == static_cast<std::size_t>((5 - 2) * (4 - 2)));
    for (std::size_t r = 1; r < cloud.rows(); ++r) {
        CHECK(std::memcmp(cloud.row(r).data(), cloud.row(0).data(), sizeof(double) * cloud.dim) == 0);
    }
}

TEST_CASE("embed_image window larger than the image") {
    GridImage img;
    img.width = 3;
    img.height = 3;
    img.values.assign(9, 0.0);
    CHECK_THROWS_AS(embed_image(img, square_window_offsets(4)), domain_too_short);
}
