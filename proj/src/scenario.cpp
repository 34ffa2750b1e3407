#include "urbancool/scenario.hpp"

#include <algorithm>
#include <numeric>

#include "urbancool/stats.hpp"

namespace urbancool {

namespace {

double explicit_ref_capacity(const Grid& ndvi, const ValidCellSet& valid,
                             double slope_magnitude, double ref, Grid* local_out) {
    if (valid.n() == 0) throw DataError("scenario: empty valid set");
    Grid local = ndvi;
    local.values.setConstant(ndvi.header.nodata_value);
    local.valid.setConstant(false);
    double sum = 0.0;
    for (int i : valid.indices) {
        const double v = (ndvi.values[i] - ref) * slope_magnitude;
        local.values[i] = v;
        local.valid[i] = true;
        sum += v;
    }
    if (local_out) *local_out = std::move(local);
    return sum / valid.n();
}

double idealized_benefit(const Grid& local_cc, const Grid& pop, const ValidCellSet& valid,
                         double actual_cb) {
    std::vector<double> cc_vals, pop_vals;
    cc_vals.reserve(valid.n());
    pop_vals.reserve(valid.n());
    bool uniform = true;
    const double p0 = pop.values[valid.indices.front()];
    for (int i : valid.indices) {
        cc_vals.push_back(local_cc.values[i]);
        pop_vals.push_back(pop.values[i]);
        uniform = uniform && pop.values[i] == p0;
    }
    if (uniform) return actual_cb;  // any pairing of equal weights is the mean

    // descending stable sort = ties resolved by original cell index ascending
    std::stable_sort(cc_vals.begin(), cc_vals.end(), std::greater<>());
    std::stable_sort(pop_vals.begin(), pop_vals.end(), std::greater<>());
    double weighted = 0.0, total = 0.0;
    for (size_t k = 0; k < cc_vals.size(); ++k) {
        weighted += cc_vals[k] * pop_vals[k];
        total += pop_vals[k];
    }
    return weighted / total;
}

double gini_nonnegative(const std::vector<double>& values,
                        const std::vector<double>& weights) {
    std::vector<double> v, w;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= 0.0 && weights[i] > 0.0) {
            v.push_back(values[i]);
            w.push_back(weights[i]);
        }
    }
    if (v.empty()) return 0.0;
    double total = 0.0;
    for (double x : v) total += x;
    if (total == 0.0) return 0.0;  // perfectly equal (all zero)
    return gini(v, w);
}

}  // namespace

std::string to_string(ScenarioMode m) {
    switch (m) {
        case ScenarioMode::ndvi_only: return "ndvi";
        case ScenarioMode::ce_only: return "ce";
        case ScenarioMode::both: return "both";
    }
    return "both";
}

RegionalBounds regional_upper_bounds(std::span<const ScenarioCityData> cities) {
    RegionalBounds b;
    for (const auto& c : cities) {
        b.ndvi_max[c.record.koppen].push_back(c.max_ndvi);
        b.ce[c.record.koppen].push_back(c.ce);
    }
    for (auto& [k, v] : b.ndvi_max) std::sort(v.begin(), v.end());
    for (auto& [k, v] : b.ce) std::sort(v.begin(), v.end());
    return b;
}

Grid enhance_ndvi(const Grid& ndvi, const ValidCellSet& valid, double target) {
    if (target < 0.0 || target > 1.0)
        throw ArgumentError("enhance_ndvi: target outside [0,1]");
    Grid out = ndvi;
    for (int i : valid.indices) out.values[i] = std::max(out.values[i], target);
    return out;
}

double enhance_ce(double ce_city, const std::vector<double>& region_ce_list, double p) {
    if (region_ce_list.empty()) throw ConfigError("enhance_ce: empty regional ce list");
    return std::max(ce_city, percentile(region_ce_list, p));
}

std::vector<std::pair<double, double>> idealize_distribution(
    std::span<const double> ndvi_values, std::span<const double> pop_values) {
    if (ndvi_values.size() != pop_values.size())
        throw ArgumentError("idealize_distribution: length mismatch");
    std::vector<double> v(ndvi_values.begin(), ndvi_values.end());
    std::vector<double> p(pop_values.begin(), pop_values.end());
    std::stable_sort(v.begin(), v.end(), std::greater<>());
    std::stable_sort(p.begin(), p.end(), std::greater<>());
    std::vector<std::pair<double, double>> out;
    out.reserve(v.size());
    for (size_t k = 0; k < v.size(); ++k) out.emplace_back(p[k], v[k]);
    return out;
}

ScenarioResult scenario_run(std::span<const ScenarioCityData> cities,
                            const RegionalBounds& bounds, const ScenarioConfig& config) {
    ScenarioResult result;
    for (int p : config.percentiles) {
        std::vector<double> cc_vals, cb_vals;
        std::vector<double> w_density, w_size;
        cc_vals.reserve(cities.size());
        cb_vals.reserve(cities.size());

        for (const auto& city : cities) {
            const auto nd_it = bounds.ndvi_max.find(city.record.koppen);
            const auto ce_it = bounds.ce.find(city.record.koppen);
            if (nd_it == bounds.ndvi_max.end() || ce_it == bounds.ce.end())
                throw ConfigError("city " + city.record.city_id +
                                  " has no regional bounds for its climate class");

            const bool raise_ndvi = config.mode != ScenarioMode::ce_only;
            const bool raise_ce = config.mode != ScenarioMode::ndvi_only;

            const Grid* ndvi = &city.ndvi;
            Grid enhanced;
            if (raise_ndvi) {
                const double target =
                    std::clamp(percentile(nd_it->second, p), 0.0, 1.0);
                enhanced = enhance_ndvi(city.ndvi, city.valid, target);
                ndvi = &enhanced;
            }
            const double ce = raise_ce ? enhance_ce(city.ce, ce_it->second, p) : city.ce;
            const double ref =
                config.reference == Reference::city_min ? city.min_ndvi : 0.0;
            // keep the baseline's -slope bitwise when the enhancement is a no-op
            const double slope_magnitude =
                (ce == city.ce) ? city.slope_magnitude : 100.0 * ce;

            Grid local_cc;
            const double cc =
                explicit_ref_capacity(*ndvi, city.valid, slope_magnitude, ref, &local_cc);
            const double cb = cooling_benefit(local_cc, city.pop, city.valid).cb;
            const double cb_out =
                config.idealize ? idealized_benefit(local_cc, city.pop, city.valid, cb)
                                : cb;

            result.rows.push_back(
                {city.record.city_id, p, config.mode, config.idealize, cc, cb_out});
            cc_vals.push_back(cc);
            cb_vals.push_back(cb_out);
            w_density.push_back(city.record.population_density());
            w_size.push_back(city.record.population);
        }

        ScenarioAggregate agg;
        agg.percentile = p;
        agg.mode = config.mode;
        agg.idealize = config.idealize;
        agg.cc_q025 = percentile(cc_vals, 2.5);
        agg.cc_q25 = percentile(cc_vals, 25.0);
        agg.cc_median = percentile(cc_vals, 50.0);
        agg.cc_q75 = percentile(cc_vals, 75.0);
        agg.cc_q975 = percentile(cc_vals, 97.5);
        agg.cb_q025 = percentile(cb_vals, 2.5);
        agg.cb_q25 = percentile(cb_vals, 25.0);
        agg.cb_median = percentile(cb_vals, 50.0);
        agg.cb_q75 = percentile(cb_vals, 75.0);
        agg.cb_q975 = percentile(cb_vals, 97.5);

        const std::vector<double> ones(cc_vals.size(), 1.0);
        agg.gini_cc[0] = gini_nonnegative(cc_vals, ones);
        agg.gini_cc[1] = gini_nonnegative(cc_vals, w_density);
        agg.gini_cc[2] = gini_nonnegative(cc_vals, w_size);
        agg.gini_cb[0] = gini_nonnegative(cb_vals, ones);
        agg.gini_cb[1] = gini_nonnegative(cb_vals, w_density);
        agg.gini_cb[2] = gini_nonnegative(cb_vals, w_size);
        result.aggregates.push_back(agg);
    }
    return result;
}

}  // namespace urbancool
