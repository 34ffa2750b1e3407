#include <doctest.h>

#include <cmath>
#include <random>

#include "urbancool/inequality.hpp"

using namespace urbancool;

TEST_CASE("lorenz_curve shapes") {
    SUBCASE("perfect equality lies on the diagonal") {
        std::vector<double> v = {1, 1}, w = {1, 1};
        auto curve = lorenz_curve(v, w);
        REQUIRE(curve.points.size() == 3);
        CHECK(curve.points[0].cum_weight_share == 0.0);
        CHECK(curve.points[1].cum_weight_share == doctest::Approx(0.5));
        CHECK(curve.points[1].cum_value_share == doctest::Approx(0.5));
        CHECK(curve.points[2].cum_weight_share == 1.0);
        CHECK(curve.points[2].cum_value_share == 1.0);
    }
    SUBCASE("zero-valued city pulls the curve down") {
        std::vector<double> v = {0, 1}, w = {1, 1};
        auto curve = lorenz_curve(v, w);
        CHECK(curve.points[1].cum_weight_share == doctest::Approx(0.5));
        CHECK(curve.points[1].cum_value_share == doctest::Approx(0.0));
    }
    SUBCASE("curve is monotone and ends at (1,1)") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        std::vector<double> v(25), w(25);
        for (int i = 0; i < 25; ++i) {
            v[i] = u(rng);
            w[i] = u(rng) + 0.1;
        }
        auto curve = lorenz_curve(v, w);
        CHECK(curve.points.back().cum_weight_share == 1.0);
        CHECK(curve.points.back().cum_value_share == 1.0);
        for (size_t k = 1; k < curve.points.size(); ++k) {
            CHECK(curve.points[k].cum_weight_share >=
                  curve.points[k - 1].cum_weight_share);
            CHECK(curve.points[k].cum_value_share >=
                  curve.points[k - 1].cum_value_share);
            // sorted ascending keeps the curve under the diagonal
            CHECK(curve.points[k].cum_value_share <=
                  curve.points[k].cum_weight_share + 1e-12);
        }
    }
    SUBCASE("all-zero values are degenerate") {
        std::vector<double> v = {0, 0}, w = {1, 1};
        CHECK_THROWS_AS(lorenz_curve(v, w), DegenerateInput);
    }
}

TEST_CASE("gini fixed values") {
    const std::vector<double> ones = {1, 1};
    const std::vector<double> equal = {5, 5, 5}, wts = {1, 2, 3};
    const std::vector<double> pair13 = {1, 3}, pair01 = {0, 1};
    const std::vector<double> single_v = {5.0}, single_w = {2.0};
    CHECK(gini(equal, wts) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(gini(pair13, ones) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(gini(pair01, ones) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gini_brute_force(pair13, ones) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(gini_brute_force(single_v, single_w) == 0.0);
}

TEST_CASE("gini matches the pairwise brute force on random instances") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> nn(1, 60);
    std::uniform_real_distribution<double> val(0.0, 100.0);
    std::uniform_real_distribution<double> wt(0.01, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = nn(rng);
        std::vector<double> v(n), w(n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            v[i] = val(rng);
            w[i] = wt(rng);
            nonzero = nonzero || v[i] > 0;
        }
        if (!nonzero) v[0] = 1.0;
        CHECK(std::abs(gini(v, w) - gini_brute_force(v, w)) <= 1e-12);
    }
}

TEST_CASE("gini scale and weight-scale invariance") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> val(0.0, 50.0);
    std::uniform_real_distribution<double> wt(0.5, 5.0);
    std::vector<double> v(40), w(40);
    for (int i = 0; i < 40; ++i) {
        v[i] = val(rng);
        w[i] = wt(rng);
    }
    const double base = gini(v, w);
    std::vector<double> v3 = v, w7 = w;
    for (auto& e : v3) e *= 3.0;
    for (auto& e : w7) e *= 7.0;
    CHECK(std::abs(gini(v3, w) - base) <= 1e-12);
    CHECK(std::abs(gini(v, w7) - base) <= 1e-12);
    // equal weights behave like the unweighted estimator
    std::vector<double> ones(40, 1.0), cs(40, 2.5);
    CHECK(std::abs(gini(v, cs) - gini(v, ones)) <= 1e-12);
}

TEST_CASE("adding a city at the weighted mean never increases gini") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> val(0.1, 20.0);
    std::uniform_real_distribution<double> wt(0.5, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 4;  // n <= 5
        std::vector<double> v(n), w(n);
        double sw = 0, swx = 0;
        for (int i = 0; i < n; ++i) {
            v[i] = val(rng);
            w[i] = wt(rng);
            sw += w[i];
            swx += w[i] * v[i];
        }
        const double before = gini_brute_force(v, w);
        v.push_back(swx / sw);
        w.push_back(wt(rng));
        CHECK(gini_brute_force(v, w) <= before + 1e-12);
    }
}

TEST_CASE("lorenz tie order is deterministic by label") {
    std::vector<double> v = {2, 2, 1};
    std::vector<double> w = {1, 2, 1};
    std::vector<std::string> labels = {"b", "a", "c"};
    auto curve = lorenz_curve(v, w, labels);
    // after "c" (value 1), ties on 2 order as a then b: weights 1,2,1 -> shares
    CHECK(curve.points[1].cum_weight_share == doctest::Approx(0.25));
    CHECK(curve.points[2].cum_weight_share == doctest::Approx(0.75));  // "a" w=2
}
