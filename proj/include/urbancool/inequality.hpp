#pragma once

#include <span>
#include <string>
#include <vector>

#include "urbancool/errors.hpp"

namespace urbancool {

enum class WeightScheme { unweighted, population_density, population_size };

std::string to_string(WeightScheme s);

struct LorenzPoint {
    double cum_weight_share = 0.0;
    double cum_value_share = 0.0;
};

/// Cumulative (weight share, value share) polyline from (0,0) to (1,1),
/// cities sorted by value ascending.
struct LorenzCurve {
    std::vector<LorenzPoint> points;
};

/// labels break value ties deterministically; pass {} to fall back to input order.
LorenzCurve lorenz_curve(std::span<const double> values, std::span<const double> weights,
                         std::span<const std::string> labels = {});

/// Trapezoidal integral of the Lorenz curve: G = 1 - sum (dP)(L_k + L_{k-1}).
double gini(std::span<const double> values, std::span<const double> weights);

/// O(n^2) pairwise form, kept as an independent check of gini().
double gini_brute_force(std::span<const double> values, std::span<const double> weights);

}  // namespace urbancool
