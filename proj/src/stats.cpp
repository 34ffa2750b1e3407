#include "urbancool/stats.hpp"

#include <algorithm>
#include <cmath>

namespace urbancool {

RegressionResult ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("ols_fit: length mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 2) throw InsufficientData("ols_fit: need at least 2 points");

    Eigen::Map<const Eigen::ArrayXd> xa(x.data(), n);
    Eigen::Map<const Eigen::ArrayXd> ya(y.data(), n);
    const double mx = xa.mean();
    const double my = ya.mean();
    const Eigen::ArrayXd dx = xa - mx;
    const Eigen::ArrayXd dy = ya - my;
    const double sxx = (dx * dx).sum();
    const double syy = (dy * dy).sum();
    const double sxy = (dx * dy).sum();
    if (sxx == 0.0) throw DegenerateX("ols_fit: x is constant");

    RegressionResult r;
    r.n = n;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    if (syy == 0.0) {
        r.r2 = 0.0;  // constant y, total sum of squares is zero
    } else {
        r.r2 = std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    }
    return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("pearson: length mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 2) throw InsufficientData("pearson: need at least 2 points");

    Eigen::Map<const Eigen::ArrayXd> xa(x.data(), n);
    Eigen::Map<const Eigen::ArrayXd> ya(y.data(), n);
    const Eigen::ArrayXd dx = xa - xa.mean();
    const Eigen::ArrayXd dy = ya - ya.mean();
    const double sxx = (dx * dx).sum();
    const double syy = (dy * dy).sum();
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("pearson: constant series");
    return std::clamp((dx * dy).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw InsufficientData("percentile: empty list");
    if (p < 0.0 || p > 100.0) throw ArgumentError("percentile: p outside [0,100]");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    const double h = static_cast<double>(n - 1) * p / 100.0;
    const size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= n) return values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace urbancool
