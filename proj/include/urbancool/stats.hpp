#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "urbancool/errors.hpp"

namespace urbancool {

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n = 0;
};

/// Two-pass (mean-subtracted) ordinary least squares of y on x.
/// r2 is defined as 0 when y is constant.
RegressionResult ols_fit(std::span<const double> x, std::span<const double> y);

double pearson(std::span<const double> x, std::span<const double> y);

/// Linear-interpolation quantile: h = (n-1)*p/100 over the sorted values.
double percentile(std::vector<double> values, double p);

}  // namespace urbancool
