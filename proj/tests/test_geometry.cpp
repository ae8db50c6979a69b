#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "slfv/geometry.hpp"
#include "slfv/rng.hpp"

using namespace slfv;

TEST_CASE("ball volumes in d = 1, 2, 3") {
    CHECK(ball_volume(1, 1.0) == Catch::Approx(2.0));
    CHECK(ball_volume(2, 1.0) == Catch::Approx(std::numbers::pi));
    CHECK(ball_volume(3, 2.0) == Catch::Approx(32.0 * std::numbers::pi / 3.0));
    CHECK_THROWS_AS(ball_volume(4, 1.0), config_error);
    CHECK_THROWS_AS(ball_volume(1, 0.0), input_error);
}

TEST_CASE("lens volume endpoints") {
    for (int d = 1; d <= 3; ++d) {
        CHECK(ball_intersection_volume(d, 1.0, 0.0) == Catch::Approx(ball_volume(d, 1.0)));
        CHECK(ball_intersection_volume(d, 1.0, 2.5) == 0.0);
        CHECK(ball_intersection_volume(d, 1.0, 2.0) == 0.0);
    }
    CHECK(ball_intersection_volume(1, 1.0, 1.0) == Catch::Approx(1.0)); // 2r - m
}

TEST_CASE("lens volume is non-increasing in separation") {
    for (int d = 1; d <= 3; ++d) {
        double prev = ball_intersection_volume(d, 1.3, 0.0);
        for (int i = 1; i <= 100; ++i) {
            const double m = 2.6 * i / 100.0;
            const double v = ball_intersection_volume(d, 1.3, m);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("lens volume against Monte Carlo hit counting") {
    // Oracle: P(point uniform in B(x,r) also lies in B(y,r)) = V_r(x,y)/V_r.
    Rng rng(20240811);
    for (int d = 1; d <= 3; ++d) {
        const double r = 0.8;
        const double m = 0.9;
        Point x{0.0, 0.0, 0.0};
        Point y{0.0, 0.0, 0.0};
        y[0] = m;
        const long n = 1000000;
        long hits = 0;
        for (long i = 0; i < n; ++i) {
            Point p = rng.uniform_in_ball(x, r, d);
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                const double dv = p[k] - y[k];
                s += dv * dv;
            }
            if (s <= r * r) ++hits;
        }
        const double p_hat = static_cast<double>(hits) / n;
        const double p_true = ball_intersection_volume(d, r, m) / ball_volume(d, r);
        const double se = std::sqrt(p_true * (1.0 - p_true) / n);
        CHECK(std::abs(p_hat - p_true) <= 4.0 * se);
    }
}

TEST_CASE("torus distance basics") {
    TorusDomain dom1(1, 10.0);
    CHECK(torus_distance({0.1, 0, 0}, {0.2, 0, 0}, dom1) == Catch::Approx(0.1));
    CHECK(torus_distance({0.1, 0, 0}, {9.9, 0, 0}, dom1) == Catch::Approx(0.2));
    TorusDomain dom2(2, 10.0);
    CHECK(torus_distance({0.0, 0.0, 0}, {5.0, 5.0, 0}, dom2) ==
          Catch::Approx(std::sqrt(50.0)));
    CHECK_THROWS_AS(torus_distance({-0.1, 0, 0}, {0.2, 0, 0}, dom1), input_error);
}

TEST_CASE("torus distance equals brute force over the image grid") {
    Rng rng(7);
    for (int d = 1; d <= 3; ++d) {
        TorusDomain dom(d, 3.7);
        for (int trial = 0; trial < 200; ++trial) {
            Point x = rng.uniform_in_box(dom);
            Point y = rng.uniform_in_box(dom);
            double best = 1e300;
            const int shifts = 1;
            for (int i = -shifts; i <= shifts; ++i) {
                for (int j = -shifts; j <= shifts; ++j) {
                    for (int k = -shifts; k <= shifts; ++k) {
                        double s = 0.0;
                        const int off[3] = {i, j, k};
                        for (int c = 0; c < d; ++c) {
                            const double dv = x[c] - y[c] + off[c] * dom.side_length;
                            s += dv * dv;
                        }
                        best = std::min(best, s);
                    }
                }
            }
            CHECK(dom.distance(x, y) == Catch::Approx(std::sqrt(best)));
            CHECK(dom.distance(x, y) == Catch::Approx(dom.distance(y, x)));
            CHECK(dom.distance(x, x) == 0.0);
            CHECK(dom.distance(x, y) <=
                  std::sqrt(static_cast<double>(d)) * dom.side_length / 2.0 + 1e-12);
        }
    }
}

TEST_CASE("wrap convention") {
    TorusDomain dom(1, 10.0);
    CHECK(dom.wrap_coord(10.0) == 0.0);
    CHECK(dom.wrap_coord(-0.5) == Catch::Approx(9.5));
    CHECK(dom.wrap_coord(23.5) == Catch::Approx(3.5));
}
