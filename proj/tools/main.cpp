#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "urbancool/pipeline.hpp"

namespace {

using namespace urbancool;

Reference parse_reference(const std::string& s) {
    if (s == "min") return Reference::city_min;
    if (s == "zero") return Reference::zero;
    throw CLI::ValidationError("--reference must be min or zero");
}

std::vector<ScenarioMode> parse_modes(const std::string& s) {
    if (s == "ndvi") return {ScenarioMode::ndvi_only};
    if (s == "ce") return {ScenarioMode::ce_only};
    if (s == "both") return {ScenarioMode::both};
    if (s == "all")
        return {ScenarioMode::ndvi_only, ScenarioMode::ce_only, ScenarioMode::both};
    throw CLI::ValidationError("--mode must be ndvi, ce, both, or all");
}

std::vector<bool> parse_idealize(const std::string& s) {
    if (s == "on") return {true};
    if (s == "off") return {false};
    if (s == "both") return {false, true};
    throw CLI::ValidationError("--idealize must be on, off, or both");
}

std::vector<WeightScheme> parse_schemes(const std::string& s) {
    if (s == "unweighted") return {WeightScheme::unweighted};
    if (s == "density") return {WeightScheme::population_density};
    if (s == "size") return {WeightScheme::population_size};
    if (s == "all")
        return {WeightScheme::unweighted, WeightScheme::population_density,
                WeightScheme::population_size};
    throw CLI::ValidationError("--schemes must be unweighted, density, size, or all");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Urban green-space cooling metrics, inequality, and scenario analysis"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);

    std::string manifest, out = "out", reference = "min", mode = "all";
    std::string idealize = "off", schemes = "all";
    int min_cells = 30, parallelism = 1;
    bool exclude_negative = true, local_maps = false, lorenz_svg = false;
    std::vector<int> percentiles = {50, 60, 70, 80, 90};

    auto add_common = [&](CLI::App* cmd, bool needs_manifest) {
        if (needs_manifest)
            cmd->add_option("--manifest", manifest, "Manifest CSV path")->required();
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("--reference", reference, "Capacity reference: min|zero");
        cmd->add_option("--min-cells", min_cells, "Minimum valid cells per city");
        cmd->add_flag("--include-negative-ce",
                      [&exclude_negative](int64_t) { exclude_negative = false; },
                      "Keep (clamp) cities whose regression slope is positive");
        cmd->add_option("--parallelism", parallelism, "Worker thread count")
            ->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "Check manifest and rasters");
    add_common(validate, true);

    auto* compute = app.add_subcommand("compute", "Per-city cooling metrics");
    add_common(compute, true);
    compute->add_flag("--emit-local-maps", local_maps, "Write local CC/CB rasters");

    auto* gini_cmd = app.add_subcommand("gini", "Between-city inequality report");
    add_common(gini_cmd, true);
    gini_cmd->add_option("--schemes", schemes, "unweighted|density|size|all");
    gini_cmd->add_flag("--emit-lorenz-svg", lorenz_svg, "Write Lorenz SVG plots");

    auto* scenario = app.add_subcommand("scenario", "Potential-enhancement sweep");
    add_common(scenario, true);
    scenario->add_option("--percentiles", percentiles, "Enhancement percentiles");
    scenario->add_option("--mode", mode, "ndvi|ce|both|all");
    scenario->add_option("--idealize", idealize, "on|off|both");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic test corpus");
    SynthSpec spec;
    std::string ndvi_model = "uniform_random", pop_model = "uniform";
    synth->add_option("--out", out, "Output directory");
    synth->add_option("--cities", spec.n_cities, "Number of cities");
    synth->add_option("--rows", spec.nrows, "Raster rows per city");
    synth->add_option("--cols", spec.ncols, "Raster columns per city");
    synth->add_option("--slope-min", spec.slope_min, "Min true slope magnitude");
    synth->add_option("--slope-max", spec.slope_max, "Max true slope magnitude");
    synth->add_option("--ndvi-model", ndvi_model, "uniform_random|gradient|clustered");
    synth->add_option("--pop-model", pop_model, "uniform|clustered|anti_ndvi");
    synth->add_option("--noise-sd", spec.lst_noise_sd, "LST noise sd (degC)");
    synth->add_option("--months", spec.months, "1 or 12 monthly rasters");
    synth->add_option("--seed", spec.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            spec.ndvi_model = parse_ndvi_model(ndvi_model);
            spec.pop_model = parse_pop_model(pop_model);
            return run_synth(spec, out);
        }
        RunConfig cfg;
        cfg.manifest_path = manifest;
        cfg.out_dir = out;
        cfg.reference = parse_reference(reference);
        cfg.exclude_negative_ce = exclude_negative;
        cfg.min_valid_cells = min_cells;
        cfg.percentiles = percentiles;
        cfg.modes = parse_modes(mode);
        cfg.idealize_options = parse_idealize(idealize);
        cfg.schemes = parse_schemes(schemes);
        cfg.parallelism = parallelism;
        cfg.emit_local_maps = local_maps;
        cfg.emit_lorenz_svg = lorenz_svg;

        if (validate->parsed()) return run_validate(cfg);
        if (compute->parsed()) return run_compute(cfg);
        if (gini_cmd->parsed()) return run_gini(cfg);
        if (scenario->parsed()) return run_scenario(cfg);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
