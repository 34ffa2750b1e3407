#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "urbancool/stats.hpp"

using namespace urbancool;

TEST_CASE("ols_fit recovers an exact line") {
    std::vector<double> x = {0, 1, 2, 3};
    std::vector<double> y = {1, 3, 5, 7};  // y = 2x + 1
    auto r = ols_fit(x, y);
    CHECK(r.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.n == 4);
}

TEST_CASE("ols_fit with constant y") {
    std::vector<double> x = {0, 1, 2};
    std::vector<double> y = {5, 5, 5};
    auto r = ols_fit(x, y);
    CHECK(r.slope == 0.0);
    CHECK(r.r2 == 0.0);
}

TEST_CASE("ols_fit hand-derived normal equations") {
    std::vector<double> x = {0, 1, 2};
    std::vector<double> y = {0, 0, 3};
    auto r = ols_fit(x, y);
    CHECK(r.slope == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.intercept == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("ols_fit error paths") {
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(ols_fit(one, one), InsufficientData);
    std::vector<double> cx = {2, 2, 2};
    std::vector<double> y = {1, 2, 3};
    CHECK_THROWS_AS(ols_fit(cx, y), DegenerateX);
}

TEST_CASE("ols_fit affine invariances") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(40), y(40), y_shift(40), y_scale(40);
        for (int i = 0; i < 40; ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
            y_shift[i] = y[i] + 123.5;
            y_scale[i] = y[i] * 3.0;
        }
        auto base = ols_fit(x, y);
        auto shifted = ols_fit(x, y_shift);
        auto scaled = ols_fit(x, y_scale);
        CHECK(shifted.slope == doctest::Approx(base.slope).epsilon(1e-9));
        CHECK(scaled.slope == doctest::Approx(3.0 * base.slope).epsilon(1e-9));
    }
}

TEST_CASE("ols_fit recovers noiseless affine data to 1e-9") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coef(-1e6, 1e6);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = coef(rng), b = coef(rng);
        std::vector<double> x(50), y(50);
        for (int i = 0; i < 50; ++i) {
            x[i] = u(rng);
            y[i] = a + b * x[i];
        }
        auto r = ols_fit(x, y);
        CHECK(std::abs(r.slope - b) <= 1e-9 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("pearson basic values") {
    std::vector<double> x = {1, 2, 3, 5};
    std::vector<double> nx = {-1, -2, -3, -5};
    CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(x, nx) == doctest::Approx(-1.0).epsilon(1e-12));
    std::vector<double> c = {4, 4, 4, 4};
    CHECK_THROWS_AS(pearson(x, c), DegenerateInput);
}

TEST_CASE("pearson against a direct formula") {
    std::vector<double> x = {1, 2, 3};
    std::vector<double> y = {1, 2, 4};
    // independent evaluation from raw sums
    const double n = 3, sx = 6, sy = 7, sxx = 14, syy = 21, sxy = 17;
    const double expected = (n * sxy - sx * sy) /
                            std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(pearson(x, y) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pearson is invariant under positive affine transforms") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-10, 10);
    std::vector<double> x(30), y(30), x2(30);
    for (int i = 0; i < 30; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
        x2[i] = 2.5 * x[i] + 7.0;
    }
    CHECK(pearson(x2, y) == doctest::Approx(pearson(x, y)).epsilon(1e-12));
}

TEST_CASE("percentile fixed interpolation rule") {
    std::vector<double> v = {1, 2, 3, 4, 5};
    CHECK(percentile(v, 50) == 3.0);
    CHECK(percentile(v, 90) == doctest::Approx(4.6).epsilon(1e-15));  // h=3.6
    CHECK(percentile({7.0}, 31.4) == 7.0);
    CHECK(percentile(v, 0) == 1.0);
    CHECK(percentile(v, 100) == 5.0);
    CHECK_THROWS_AS(percentile({}, 50), InsufficientData);
    CHECK_THROWS_AS(percentile(v, 101), ArgumentError);
}

TEST_CASE("percentile is monotone in p") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-50, 50);
    std::vector<double> v(37);
    for (auto& e : v) e = u(rng);
    double prev = percentile(v, 0);
    for (double p = 1; p <= 100; p += 1) {
        double cur = percentile(v, p);
        CHECK(cur >= prev);
        prev = cur;
    }
}
