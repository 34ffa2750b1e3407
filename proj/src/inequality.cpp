#include "urbancool/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace urbancool {

namespace {

void check_inputs(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size())
        throw ArgumentError("values and weights lengths differ");
    if (values.empty()) throw InsufficientData("empty input");
    double total = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw ArgumentError("negative value");
        if (!(weights[i] > 0.0)) throw ArgumentError("weights must be > 0");
        total += values[i] * weights[i];
    }
    if (total == 0.0) throw DegenerateInput("all values are zero");
}

std::vector<size_t> sorted_order(std::span<const double> values,
                                 std::span<const std::string> labels) {
    std::vector<size_t> order(values.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        if (!labels.empty()) return labels[a] < labels[b];
        return a < b;
    });
    return order;
}

}  // namespace

std::string to_string(WeightScheme s) {
    switch (s) {
        case WeightScheme::unweighted: return "unweighted";
        case WeightScheme::population_density: return "density";
        case WeightScheme::population_size: return "size";
    }
    return "unweighted";
}

LorenzCurve lorenz_curve(std::span<const double> values, std::span<const double> weights,
                         std::span<const std::string> labels) {
    check_inputs(values, weights);
    const auto order = sorted_order(values, labels);

    double total_w = 0.0, total_vw = 0.0;
    for (size_t i : order) {
        total_w += weights[i];
        total_vw += values[i] * weights[i];
    }

    LorenzCurve curve;
    curve.points.reserve(order.size() + 1);
    curve.points.push_back({0.0, 0.0});
    double cw = 0.0, cvw = 0.0;
    for (size_t i : order) {
        cw += weights[i];
        cvw += values[i] * weights[i];
        curve.points.push_back({cw / total_w, cvw / total_vw});
    }
    curve.points.back() = {1.0, 1.0};  // pin the endpoint against rounding
    return curve;
}

double gini(std::span<const double> values, std::span<const double> weights) {
    const LorenzCurve curve = lorenz_curve(values, weights);
    double twice_area = 0.0;
    for (size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        twice_area += (b.cum_weight_share - a.cum_weight_share) *
                      (b.cum_value_share + a.cum_value_share);
    }
    return 1.0 - twice_area;
}

double gini_brute_force(std::span<const double> values, std::span<const double> weights) {
    check_inputs(values, weights);
    const size_t n = values.size();
    double sw = 0.0, swx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sw += weights[i];
        swx += weights[i] * values[i];
    }
    const double mu = swx / sw;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            acc += weights[i] * weights[j] * std::abs(values[i] - values[j]);
    return acc / (2.0 * sw * sw * mu);
}

}  // namespace urbancool
