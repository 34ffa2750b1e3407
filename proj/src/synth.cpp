#include "urbancool/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "urbancool/csv.hpp"

namespace urbancool {

namespace {

GridHeader make_header(int nrows, int ncols) {
    GridHeader h;
    h.ncols = ncols;
    h.nrows = nrows;
    h.xllcorner = 0.0;
    h.yllcorner = 0.0;
    h.cellsize = 1.0;
    h.nodata_value = -9999.0;
    return h;
}

Eigen::ArrayXd make_ndvi(NdviModel model, int nrows, int ncols, std::mt19937_64& rng) {
    const int n = nrows * ncols;
    Eigen::ArrayXd v(n);
    std::uniform_real_distribution<double> u(0.05, 0.80);
    switch (model) {
        case NdviModel::uniform_random:
            for (int i = 0; i < n; ++i) v[i] = u(rng);
            break;
        case NdviModel::gradient: {
            std::uniform_real_distribution<double> jitter(-0.02, 0.02);
            for (int r = 0; r < nrows; ++r)
                for (int c = 0; c < ncols; ++c) {
                    double base = 0.10 + 0.60 * c / std::max(1, ncols - 1);
                    v[r * ncols + c] =
                        std::clamp(base + jitter(rng), 0.01, 0.95);
                }
            break;
        }
        case NdviModel::clustered: {
            // a few gaussian greenness blobs over a dry background
            std::uniform_real_distribution<double> pos_r(0.0, nrows - 1.0);
            std::uniform_real_distribution<double> pos_c(0.0, ncols - 1.0);
            const int blobs = 3;
            std::vector<double> br(blobs), bc(blobs);
            for (int b = 0; b < blobs; ++b) {
                br[b] = pos_r(rng);
                bc[b] = pos_c(rng);
            }
            const double sigma = std::max(nrows, ncols) / 6.0;
            for (int r = 0; r < nrows; ++r)
                for (int c = 0; c < ncols; ++c) {
                    double val = 0.08;
                    for (int b = 0; b < blobs; ++b) {
                        const double d2 = (r - br[b]) * (r - br[b]) +
                                          (c - bc[b]) * (c - bc[b]);
                        val += 0.55 * std::exp(-d2 / (2.0 * sigma * sigma));
                    }
                    v[r * ncols + c] = std::min(val, 0.95);
                }
            break;
        }
    }
    return v;
}

Eigen::ArrayXd make_pop(PopModel model, const Eigen::ArrayXd& ndvi, int nrows,
                        int ncols, std::mt19937_64& rng) {
    const int n = nrows * ncols;
    Eigen::ArrayXd p(n);
    switch (model) {
        case PopModel::uniform:
            p.setConstant(100.0);
            break;
        case PopModel::clustered: {
            std::uniform_real_distribution<double> pos_r(0.0, nrows - 1.0);
            std::uniform_real_distribution<double> pos_c(0.0, ncols - 1.0);
            const double cr = pos_r(rng), cc = pos_c(rng);
            const double sigma = std::max(nrows, ncols) / 4.0;
            for (int r = 0; r < nrows; ++r)
                for (int c = 0; c < ncols; ++c) {
                    const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
                    p[r * ncols + c] =
                        20.0 + 2000.0 * std::exp(-d2 / (2.0 * sigma * sigma));
                }
            break;
        }
        case PopModel::anti_ndvi:
            // denser where it is greyer
            for (int i = 0; i < n; ++i) p[i] = 1000.0 * (0.90 - ndvi[i]);
            break;
    }
    return p;
}

}  // namespace

NdviModel parse_ndvi_model(const std::string& s) {
    if (s == "uniform_random") return NdviModel::uniform_random;
    if (s == "gradient") return NdviModel::gradient;
    if (s == "clustered") return NdviModel::clustered;
    throw ArgumentError("unknown ndvi model '" + s + "'");
}

PopModel parse_pop_model(const std::string& s) {
    if (s == "uniform") return PopModel::uniform;
    if (s == "clustered") return PopModel::clustered;
    if (s == "anti_ndvi") return PopModel::anti_ndvi;
    throw ArgumentError("unknown pop model '" + s + "'");
}

SynthCorpus generate_corpus(const SynthSpec& spec, const std::filesystem::path& outdir) {
    if (spec.n_cities < 1 || spec.nrows < 1 || spec.ncols < 1)
        throw ArgumentError("synth: n_cities/rows/cols must be >= 1");
    if (spec.months != 1 && spec.months != 12)
        throw ArgumentError("synth: months must be 1 or 12");
    std::filesystem::create_directories(outdir / "rasters");

    const GridHeader header = make_header(spec.nrows, spec.ncols);
    const int n = spec.nrows * spec.ncols;

    Manifest manifest;
    SynthCorpus corpus;
    const Koppen koppens[2] = {Koppen::tropical, Koppen::temperate};

    for (int k = 0; k < spec.n_cities; ++k) {
        std::mt19937_64 rng(spec.seed * 1000003ULL + static_cast<std::uint64_t>(k));
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "city%03d", k);
        const std::string id = idbuf;

        std::uniform_real_distribution<double> slope_u(spec.slope_min, spec.slope_max);
        std::uniform_real_distribution<double> icept_u(28.0, 40.0);
        const double slope = -slope_u(rng);  // greener is cooler
        const double intercept = icept_u(rng);

        const Eigen::ArrayXd ndvi = make_ndvi(spec.ndvi_model, spec.nrows, spec.ncols, rng);
        const Eigen::ArrayXd pop = make_pop(spec.pop_model, ndvi, spec.nrows, spec.ncols, rng);
        Eigen::ArrayXd lst = intercept + slope * ndvi;
        if (spec.lst_noise_sd > 0.0) {
            std::normal_distribution<double> noise(0.0, spec.lst_noise_sd);
            for (int i = 0; i < n; ++i) lst[i] += noise(rng);
        }

        auto grid_of = [&header](const Eigen::ArrayXd& v) {
            Grid g = Grid::constant(header, 0.0);
            g.values = v;
            return g;
        };
        // manifest stores raster paths relative to its own location
        const auto raster = [&](const std::string& var, int month) {
            std::string f = id + "_" + var;
            if (month > 0) f += "_m" + std::to_string(month);
            return std::filesystem::path("rasters") / (f + ".asc");
        };

        CityRecord rec;
        rec.city_id = id;
        rec.name = "Synth City " + std::to_string(k);
        rec.country = "Synthland";
        rec.global_region = (k % 2 == 0) ? GlobalRegion::north : GlobalRegion::south;
        rec.continent = (k % 2 == 0) ? "synth_north" : "synth_south";
        rec.koppen = koppens[k % 2];
        rec.area_km2 = static_cast<double>(n);
        rec.population = pop.sum();
        rec.gdp_per_capita = 10000.0 + 500.0 * k;
        rec.mat = 10.0 + k;
        rec.map_mm = 600.0 + 20.0 * k;
        rec.elev_range = 50.0 + 5.0 * k;

        if (spec.months == 1) {
            const auto np = raster("ndvi", 0);
            const auto lp = raster("lst", 0);
            write_ascii_grid(grid_of(ndvi), outdir / np);
            write_ascii_grid(grid_of(lst), outdir / lp);
            rec.ndvi_paths = {np};
            rec.lst_paths = {lp};
        } else {
            // month 7 is the hottest; other months are strictly cooler
            for (int m = 1; m <= 12; ++m) {
                const auto np = raster("ndvi", m);
                const auto lp = raster("lst", m);
                Eigen::ArrayXd lst_m = lst - 2.0 * std::abs(m - 7);
                write_ascii_grid(grid_of(ndvi), outdir / np);
                write_ascii_grid(grid_of(lst_m), outdir / lp);
                rec.ndvi_paths.push_back(np);
                rec.lst_paths.push_back(lp);
            }
        }
        rec.pop_path = raster("pop", 0);
        rec.water_path = raster("water", 0);
        write_ascii_grid(grid_of(pop), outdir / rec.pop_path);
        write_ascii_grid(Grid::constant(header, 0.0), outdir / rec.water_path);
        manifest.cities.push_back(rec);

        // direct evaluation of the capacity/benefit sums, independent of the
        // metrics module
        SynthTruth t;
        t.city_id = id;
        t.true_slope = slope;
        t.ce_truth = -slope / 100.0;
        t.min_ndvi = ndvi.minCoeff();
        double cc_sum = 0.0, cb_num = 0.0, cb_den = 0.0;
        for (int i = 0; i < n; ++i) {
            const double local = (ndvi[i] - t.min_ndvi) * (-slope);
            cc_sum += local;
            cb_num += local * pop[i];
            cb_den += pop[i];
        }
        t.cc_truth = cc_sum / n;
        t.cb_truth = (spec.pop_model == PopModel::uniform) ? t.cc_truth : cb_num / cb_den;
        corpus.truth.push_back(t);
    }

    corpus.manifest_path = outdir / "manifest.csv";
    save_manifest(manifest, corpus.manifest_path);

    corpus.truth_path = outdir / "synth_truth.csv";
    std::ofstream tf(corpus.truth_path);
    if (!tf) throw IoError("cannot write " + corpus.truth_path.string());
    tf << "city_id,true_slope,ce_truth,min_ndvi,cc_truth,cb_truth\n";
    for (const auto& t : corpus.truth) {
        tf << t.city_id << ',' << fmt_g17(t.true_slope) << ',' << fmt_g17(t.ce_truth)
           << ',' << fmt_g17(t.min_ndvi) << ',' << fmt_g17(t.cc_truth) << ','
           << fmt_g17(t.cb_truth) << "\n";
    }
    return corpus;
}

}  // namespace urbancool
