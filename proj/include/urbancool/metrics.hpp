#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "urbancool/citymodel.hpp"
#include "urbancool/grid.hpp"
#include "urbancool/stats.hpp"

namespace urbancool {

/// Reference greenness against which local cooling capacity is measured.
enum class Reference { city_min, zero };

struct CityInputs {
    std::vector<Grid> ndvi_monthly;  // 12 monthly or 1 hottest-month grid
    std::vector<Grid> lst_monthly;
    Grid pop;
    Grid water_frac;
    std::optional<Grid> qa;
};

struct MetricFlags {
    bool negative_ce = false;
    bool low_n = false;
    bool t_near_max = false;
};

struct CityMetrics {
    std::string city_id;
    int hottest_month = 0;  // 1..12, or 0 when the input was precomputed
    double mean_lst = 0.0;
    double slope = 0.0;      // degC per NDVI unit
    double ce = 0.0;         // degC per 0.01 NDVI, = -slope/100
    double r2 = 0.0;
    int n_valid = 0;
    double mean_ndvi = 0.0;
    double min_ndvi = 0.0;
    double cc = 0.0;
    double cb = 0.0;
    double cb_3km = 0.0;
    double cb_5km = 0.0;
    double cc_rel = 0.0;     // NaN when t_near_max
    double cb_rel = 0.0;
    MetricFlags flags;
};

struct MetricsConfig {
    Reference reference = Reference::city_min;
    int min_valid_cells = 30;
    double t_max = 45.0;
};

/// Month (1-based) with the highest mean LST over the valid set; ties break
/// to the earliest month.
std::pair<int, const Grid*> select_hottest_month(std::span<const Grid> lst_monthly,
                                                 const ValidCellSet& valid);

/// OLS of LST on NDVI over the valid cells. ce = -slope/100, positive when
/// greener is cooler.
std::pair<RegressionResult, double> cooling_efficiency(const Grid& lst, const Grid& ndvi,
                                                       const ValidCellSet& valid);

struct CapacityResult {
    double cc = 0.0;
    Grid local_cc;
};

/// Eq-style capacity: local_cc_i = (NDVI_i - ref) * slope_magnitude,
/// cc = mean over valid cells. slope_magnitude = -slope = 100*ce.
CapacityResult cooling_capacity(const Grid& ndvi, const ValidCellSet& valid,
                                double slope_magnitude,
                                Reference reference = Reference::city_min);

struct BenefitResult {
    double cb = 0.0;
    Grid local_cb;
};

/// Population-weighted capacity; local_cb_i = local_cc_i * pop_i / mean_pop.
BenefitResult cooling_benefit(const Grid& local_cc, const Grid& pop,
                              const ValidCellSet& valid);

/// value / (t_max - mean_lst); throws NearLimitError within 0.5 degC of t_max.
double relative_cooling(double value, double mean_lst, double t_max = 45.0);

/// Benefit with NDVI_i replaced by its window-mean; the reference still comes
/// from the original grid.
double multiscale_benefit(const Grid& ndvi, const ValidCellSet& valid,
                          double slope_magnitude, Reference reference, const Grid& pop,
                          int window);

CityMetrics city_metrics(const CityInputs& inputs, const CityRecord& record,
                         const MetricsConfig& config);

}  // namespace urbancool
