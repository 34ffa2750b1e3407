#include "urbancool/metrics.hpp"

#include <cmath>
#include <limits>

namespace urbancool {

namespace {

// Summations run left-to-right over the valid index list so results are
// reproducible across runs and thread counts.
double capacity_with_ref(const Grid& ndvi, const ValidCellSet& valid,
                         double slope_magnitude, double ref, Grid* local_out) {
    if (valid.n() == 0) throw DataError("cooling_capacity: empty valid set");
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

double min_over_valid(const Grid& g, const ValidCellSet& valid) {
    if (valid.n() == 0) throw DataError("empty valid set");
    double m = g.values[valid.indices.front()];
    for (int i : valid.indices) m = std::min(m, g.values[i]);
    return m;
}

double mean_over_valid(const Grid& g, const ValidCellSet& valid) {
    if (valid.n() == 0) throw DataError("empty valid set");
    double sum = 0.0;
    for (int i : valid.indices) sum += g.values[i];
    return sum / valid.n();
}

}  // namespace

std::pair<int, const Grid*> select_hottest_month(std::span<const Grid> lst_monthly,
                                                 const ValidCellSet& valid) {
    if (lst_monthly.size() != 12)
        throw ArgumentError("select_hottest_month: expected 12 monthly grids");
    int best_month = 0;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < 12; ++m) {
        const Grid& g = lst_monthly[m];
        double sum = 0.0;
        int n = 0;
        for (int i : valid.indices) {
            if (g.valid[i]) {
                sum += g.values[i];
                ++n;
            }
        }
        if (n == 0)
            throw DataError("month " + std::to_string(m + 1) + " has zero valid cells");
        const double mean = sum / n;
        if (mean > best_mean) {  // strict: ties keep the earliest month
            best_mean = mean;
            best_month = m;
        }
    }
    return {best_month + 1, &lst_monthly[best_month]};
}

std::pair<RegressionResult, double> cooling_efficiency(const Grid& lst, const Grid& ndvi,
                                                       const ValidCellSet& valid) {
    std::vector<double> x, y;
    x.reserve(valid.n());
    y.reserve(valid.n());
    for (int i : valid.indices) {
        x.push_back(ndvi.values[i]);
        y.push_back(lst.values[i]);
    }
    RegressionResult r = ols_fit(x, y);
    return {r, -r.slope / 100.0};
}

CapacityResult cooling_capacity(const Grid& ndvi, const ValidCellSet& valid,
                                double slope_magnitude, Reference reference) {
    const double ref =
        reference == Reference::city_min ? min_over_valid(ndvi, valid) : 0.0;
    CapacityResult out;
    out.cc = capacity_with_ref(ndvi, valid, slope_magnitude, ref, &out.local_cc);
    return out;
}

BenefitResult cooling_benefit(const Grid& local_cc, const Grid& pop,
                              const ValidCellSet& valid) {
    if (valid.n() == 0) throw DataError("cooling_benefit: empty valid set");
    bool uniform = true;
    double total_pop = 0.0;
    const double p0 = pop.values[valid.indices.front()];
    for (int i : valid.indices) {
        if (pop.values[i] < 0.0)
            throw DataError("cooling_benefit: negative population");
        uniform = uniform && pop.values[i] == p0;
        total_pop += pop.values[i];
    }
    if (total_pop == 0.0) throw DataError("cooling_benefit: total population is zero");

    BenefitResult out;
    double weighted = 0.0;
    if (uniform) {
        // uniform weights reduce to the arithmetic mean; keep the same
        // summation order as cooling_capacity so cb == cc bitwise
        for (int i : valid.indices) weighted += local_cc.values[i];
        out.cb = weighted / valid.n();
    } else {
        for (int i : valid.indices) weighted += local_cc.values[i] * pop.values[i];
        out.cb = weighted / total_pop;
    }

    const double mean_pop = total_pop / valid.n();
    out.local_cb = local_cc;
    out.local_cb.values.setConstant(local_cc.header.nodata_value);
    out.local_cb.valid.setConstant(false);
    for (int i : valid.indices) {
        out.local_cb.values[i] = local_cc.values[i] * (pop.values[i] / mean_pop);
        out.local_cb.valid[i] = true;
    }
    return out;
}

double relative_cooling(double value, double mean_lst, double t_max) {
    if (mean_lst > t_max - 0.5)
        throw NearLimitError("mean LST " + std::to_string(mean_lst) +
                             " within 0.5 degC of t_max " + std::to_string(t_max));
    return value / (t_max - mean_lst);
}

double multiscale_benefit(const Grid& ndvi, const ValidCellSet& valid,
                          double slope_magnitude, Reference reference, const Grid& pop,
                          int window) {
    const double ref =
        reference == Reference::city_min ? min_over_valid(ndvi, valid) : 0.0;
    const Grid smoothed = neighborhood_mean(ndvi, valid, window);
    Grid local_cc;
    capacity_with_ref(smoothed, valid, slope_magnitude, ref, &local_cc);
    return cooling_benefit(local_cc, pop, valid).cb;
}

CityMetrics city_metrics(const CityInputs& inputs, const CityRecord& record,
                         const MetricsConfig& config) {
    const bool monthly = inputs.lst_monthly.size() == 12;
    if (inputs.lst_monthly.empty() || inputs.ndvi_monthly.empty())
        throw ArgumentError("city_metrics: missing ndvi/lst grids for " + record.city_id);

    std::vector<const Grid*> all;
    for (const auto& g : inputs.ndvi_monthly) all.push_back(&g);
    for (const auto& g : inputs.lst_monthly) all.push_back(&g);
    all.push_back(&inputs.pop);
    all.push_back(&inputs.water_frac);
    if (inputs.qa) all.push_back(&*inputs.qa);
    align_check(all);

    const Grid* lst = &inputs.lst_monthly.front();
    const Grid* ndvi = &inputs.ndvi_monthly.front();
    int hottest_month = 0;
    if (monthly) {
        // preliminary mask from month 1 drives the month choice, then the
        // final mask is rebuilt on the hottest month's pair
        const Grid* qa = inputs.qa ? &*inputs.qa : nullptr;
        ValidCellSet prelim = apply_masks(*ndvi, *lst, inputs.water_frac, qa);
        auto [month, hottest_lst] = select_hottest_month(inputs.lst_monthly, prelim);
        hottest_month = month;
        lst = hottest_lst;
        if (inputs.ndvi_monthly.size() == 12) ndvi = &inputs.ndvi_monthly[month - 1];
    }

    const Grid* qa = inputs.qa ? &*inputs.qa : nullptr;
    const ValidCellSet valid = apply_masks(*ndvi, *lst, inputs.water_frac, qa);
    if (valid.n() < 2)
        throw DataError("city " + record.city_id + " has fewer than 2 valid cells");

    CityMetrics m;
    m.city_id = record.city_id;
    m.hottest_month = hottest_month;
    m.n_valid = valid.n();
    m.flags.low_n = valid.n() < config.min_valid_cells;
    m.mean_lst = mean_over_valid(*lst, valid);
    m.mean_ndvi = mean_over_valid(*ndvi, valid);
    m.min_ndvi = min_over_valid(*ndvi, valid);

    auto [reg, ce] = cooling_efficiency(*lst, *ndvi, valid);
    m.slope = reg.slope;
    m.ce = ce;
    m.r2 = reg.r2;
    m.flags.negative_ce = reg.slope > 0.0;

    const double slope_magnitude = -reg.slope;
    CapacityResult cap = cooling_capacity(*ndvi, valid, slope_magnitude, config.reference);
    m.cc = cap.cc;
    BenefitResult ben = cooling_benefit(cap.local_cc, inputs.pop, valid);
    m.cb = ben.cb;
    m.cb_3km = multiscale_benefit(*ndvi, valid, slope_magnitude, config.reference,
                                  inputs.pop, 3);
    m.cb_5km = multiscale_benefit(*ndvi, valid, slope_magnitude, config.reference,
                                  inputs.pop, 5);

    try {
        m.cc_rel = relative_cooling(m.cc, m.mean_lst, config.t_max);
        m.cb_rel = relative_cooling(m.cb, m.mean_lst, config.t_max);
    } catch (const NearLimitError&) {
        m.flags.t_near_max = true;
        m.cc_rel = std::numeric_limits<double>::quiet_NaN();
        m.cb_rel = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

}  // namespace urbancool
