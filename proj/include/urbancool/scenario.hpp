#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "urbancool/citymodel.hpp"
#include "urbancool/inequality.hpp"
#include "urbancool/metrics.hpp"

namespace urbancool {

/// Per-climate-region sorted lists of per-city max NDVI ("upper bounds")
/// and per-city cooling efficiencies.
struct RegionalBounds {
    std::map<Koppen, std::vector<double>> ndvi_max;
    std::map<Koppen, std::vector<double>> ce;
};

enum class ScenarioMode { ndvi_only, ce_only, both };

std::string to_string(ScenarioMode m);

struct ScenarioConfig {
    std::vector<int> percentiles = {50, 60, 70, 80, 90};
    ScenarioMode mode = ScenarioMode::both;
    bool idealize = false;
    Reference reference = Reference::city_min;
};

/// Everything the scenario engine needs per city, computed at baseline.
struct ScenarioCityData {
    CityRecord record;
    Grid ndvi;
    Grid pop;
    ValidCellSet valid;
    double ce = 0.0;               // degC per 0.01 NDVI
    double slope_magnitude = 0.0;  // -slope from the baseline regression
    double min_ndvi = 0.0;         // original pre-enhancement reference
    double max_ndvi = 0.0;
    double baseline_cc = 0.0;
    double baseline_cb = 0.0;
};

struct ScenarioCityRow {
    std::string city_id;
    int percentile = 0;
    ScenarioMode mode = ScenarioMode::both;
    bool idealize = false;
    double potential_cc = 0.0;
    double potential_cb = 0.0;
};

struct ScenarioAggregate {
    int percentile = 0;
    ScenarioMode mode = ScenarioMode::both;
    bool idealize = false;
    // cross-city quantiles
    double cc_q025, cc_q25, cc_median, cc_q75, cc_q975;
    double cb_q025, cb_q25, cb_median, cb_q75, cb_q975;
    // Gini per weight scheme, order: unweighted, density, size
    double gini_cc[3];
    double gini_cb[3];
};

struct ScenarioResult {
    std::vector<ScenarioCityRow> rows;
    std::vector<ScenarioAggregate> aggregates;
};

RegionalBounds regional_upper_bounds(std::span<const ScenarioCityData> cities);

/// NDVI'_i = max(NDVI_i, target) on valid cells; everything else untouched.
Grid enhance_ndvi(const Grid& ndvi, const ValidCellSet& valid, double target);

/// ce' = max(ce, percentile of the regional ce list).
double enhance_ce(double ce_city, const std::vector<double>& region_ce_list, double p);

/// Rank matching: largest population paired with highest value; ties resolved
/// by original cell index ascending. Returns (population, value) pairs.
std::vector<std::pair<double, double>> idealize_distribution(
    std::span<const double> ndvi_values, std::span<const double> pop_values);

ScenarioResult scenario_run(std::span<const ScenarioCityData> cities,
                            const RegionalBounds& bounds, const ScenarioConfig& config);

}  // namespace urbancool
