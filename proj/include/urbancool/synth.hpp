#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "urbancool/citymodel.hpp"
#include "urbancool/grid.hpp"

namespace urbancool {

enum class NdviModel { uniform_random, gradient, clustered };
enum class PopModel { uniform, clustered, anti_ndvi };

NdviModel parse_ndvi_model(const std::string& s);
PopModel parse_pop_model(const std::string& s);

struct SynthSpec {
    int n_cities = 20;
    int nrows = 12;
    int ncols = 12;
    double slope_min = 5.0;   // magnitude of the true LST-NDVI slope
    double slope_max = 20.0;
    NdviModel ndvi_model = NdviModel::uniform_random;
    PopModel pop_model = PopModel::uniform;
    double lst_noise_sd = 0.0;
    int months = 1;  // 1 (precomputed hottest) or 12
    std::uint64_t seed = 42;
};

/// Ground truth recorded by the generator, evaluated directly from the
/// generated fields without going through the metrics module.
struct SynthTruth {
    std::string city_id;
    double true_slope = 0.0;  // signed, degC per NDVI unit
    double ce_truth = 0.0;
    double min_ndvi = 0.0;
    double cc_truth = 0.0;
    double cb_truth = 0.0;
};

struct SynthCorpus {
    std::filesystem::path manifest_path;
    std::filesystem::path truth_path;
    std::vector<SynthTruth> truth;
};

/// Writes a complete corpus (rasters + manifest.csv + synth_truth.csv) under
/// outdir. Deterministic for a fixed spec.
SynthCorpus generate_corpus(const SynthSpec& spec, const std::filesystem::path& outdir);

}  // namespace urbancool
