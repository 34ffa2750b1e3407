#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "urbancool/citymodel.hpp"
#include "urbancool/metrics.hpp"
#include "urbancool/scenario.hpp"
#include "urbancool/synth.hpp"

namespace urbancool {

struct RunConfig {
    std::filesystem::path manifest_path;
    std::filesystem::path out_dir;
    Reference reference = Reference::city_min;
    bool exclude_negative_ce = true;
    int min_valid_cells = 30;
    std::vector<int> percentiles = {50, 60, 70, 80, 90};
    std::vector<ScenarioMode> modes = {ScenarioMode::ndvi_only, ScenarioMode::ce_only,
                                       ScenarioMode::both};
    std::vector<bool> idealize_options = {false};
    std::vector<WeightScheme> schemes = {WeightScheme::unweighted,
                                         WeightScheme::population_density,
                                         WeightScheme::population_size};
    int parallelism = 1;
    bool emit_local_maps = false;
    bool emit_lorenz_svg = false;
};

// exit codes: 0 success, 1 partial city failures, 2 configuration/IO failure
int run_validate(const RunConfig& config);
int run_compute(const RunConfig& config);
int run_gini(const RunConfig& config);
int run_scenario(const RunConfig& config);
int run_synth(const SynthSpec& spec, const std::filesystem::path& outdir);

/// Rows of an emitted metrics.csv, reloaded for the gini stage and tests.
struct MetricsRow {
    std::string city_id;
    int hottest_month = 0;
    double mean_lst = 0, slope = 0, ce = 0, r2 = 0;
    int n_valid = 0;
    double mean_ndvi = 0, min_ndvi = 0;
    double cc = 0, cb = 0, cb_3km = 0, cb_5km = 0, cc_rel = 0, cb_rel = 0;
    std::set<std::string> flags;
};

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

}  // namespace urbancool
