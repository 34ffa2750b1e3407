#include "urbancool/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "urbancool/csv.hpp"

namespace urbancool {

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

CityInputs load_city_inputs(const CityRecord& rec) {
    CityInputs in;
    for (const auto& p : rec.ndvi_paths) in.ndvi_monthly.push_back(read_ascii_grid(p));
    for (const auto& p : rec.lst_paths) in.lst_monthly.push_back(read_ascii_grid(p));
    in.pop = read_ascii_grid(rec.pop_path);
    in.water_frac = read_ascii_grid(rec.water_path);
    if (rec.qa_path) in.qa = read_ascii_grid(*rec.qa_path);
    return in;
}

/// The hottest-month resolution shared by the compute and scenario stages.
struct ResolvedCity {
    CityInputs inputs;
    const Grid* ndvi = nullptr;
    const Grid* lst = nullptr;
    int hottest_month = 0;
    ValidCellSet valid;
};

ResolvedCity resolve_city(const CityRecord& rec) {
    ResolvedCity r;
    r.inputs = load_city_inputs(rec);
    const CityInputs& in = r.inputs;

    std::vector<const Grid*> all;
    for (const auto& g : in.ndvi_monthly) all.push_back(&g);
    for (const auto& g : in.lst_monthly) all.push_back(&g);
    all.push_back(&in.pop);
    all.push_back(&in.water_frac);
    if (in.qa) all.push_back(&*in.qa);
    align_check(all);

    const Grid* qa = in.qa ? &*in.qa : nullptr;
    r.ndvi = &in.ndvi_monthly.front();
    r.lst = &in.lst_monthly.front();
    if (in.lst_monthly.size() == 12) {
        ValidCellSet prelim = apply_masks(*r.ndvi, *r.lst, in.water_frac, qa);
        auto [month, hottest] = select_hottest_month(in.lst_monthly, prelim);
        r.hottest_month = month;
        r.lst = hottest;
        if (in.ndvi_monthly.size() == 12) r.ndvi = &in.ndvi_monthly[month - 1];
    }
    r.valid = apply_masks(*r.ndvi, *r.lst, in.water_frac, qa);
    return r;
}

const std::vector<std::string> kMetricsColumns = {
    "city_id", "hottest_month", "mean_lst", "slope", "ce",     "r2",
    "n_valid", "mean_ndvi",     "min_ndvi", "cc",    "cb",     "cb_3km",
    "cb_5km",  "cc_rel",        "cb_rel",   "flags"};

std::string flags_to_string(const MetricFlags& f) {
    std::string out;
    auto add = [&out](const char* name) {
        if (!out.empty()) out += ';';
        out += name;
    };
    if (f.negative_ce) add("negative_ce");
    if (f.low_n) add("low_n");
    if (f.t_near_max) add("t_near_max");
    return out;
}

void write_metrics_csv(const std::vector<CityMetrics>& rows,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (size_t i = 0; i < kMetricsColumns.size(); ++i)
        out << (i ? "," : "") << kMetricsColumns[i];
    out << "\n";
    for (const auto& m : rows) {
        out << m.city_id << ',' << m.hottest_month << ',' << fmt_g17(m.mean_lst) << ','
            << fmt_g17(m.slope) << ',' << fmt_g17(m.ce) << ',' << fmt_g17(m.r2) << ','
            << m.n_valid << ',' << fmt_g17(m.mean_ndvi) << ',' << fmt_g17(m.min_ndvi)
            << ',' << fmt_g17(m.cc) << ',' << fmt_g17(m.cb) << ',' << fmt_g17(m.cb_3km)
            << ',' << fmt_g17(m.cb_5km) << ',' << fmt_g17(m.cc_rel) << ','
            << fmt_g17(m.cb_rel) << ',' << flags_to_string(m.flags) << "\n";
    }
}

double parse_double_csv(const std::string& s) {
    if (s == "nan" || s == "-nan")
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("bad number '" + s + "' in metrics csv");
    return v;
}

struct GiniTask {
    std::string subset;
    std::string metric;
    WeightScheme scheme;
};

void write_lorenz_csv(const LorenzCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "cum_weight_share,cum_value_share\n";
    for (const auto& p : curve.points)
        out << fmt_g17(p.cum_weight_share) << ',' << fmt_g17(p.cum_value_share) << "\n";
}

void write_lorenz_svg(const LorenzCurve& curve, const std::filesystem::path& path) {
    const double w = 400.0, pad = 20.0;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 2 * pad
        << "\" height=\"" << w + 2 * pad << "\">\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << w + pad << "\" x2=\"" << w + pad
        << "\" y2=\"" << pad << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (const auto& p : curve.points)
        out << pad + p.cum_weight_share * w << ',' << pad + (1.0 - p.cum_value_share) * w
            << ' ';
    out << "\"/>\n</svg>\n";
}

}  // namespace

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != kMetricsColumns)
        throw SchemaError("unexpected metrics csv header in " + path.string());
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != kMetricsColumns.size())
            throw SchemaError("bad metrics csv row in " + path.string());
        MetricsRow r;
        r.city_id = f[0];
        r.hottest_month = static_cast<int>(parse_double_csv(f[1]));
        r.mean_lst = parse_double_csv(f[2]);
        r.slope = parse_double_csv(f[3]);
        r.ce = parse_double_csv(f[4]);
        r.r2 = parse_double_csv(f[5]);
        r.n_valid = static_cast<int>(parse_double_csv(f[6]));
        r.mean_ndvi = parse_double_csv(f[7]);
        r.min_ndvi = parse_double_csv(f[8]);
        r.cc = parse_double_csv(f[9]);
        r.cb = parse_double_csv(f[10]);
        r.cb_3km = parse_double_csv(f[11]);
        r.cb_5km = parse_double_csv(f[12]);
        r.cc_rel = parse_double_csv(f[13]);
        r.cb_rel = parse_double_csv(f[14]);
        for (const auto& fl : split(f[15], ';'))
            if (!fl.empty()) r.flags.insert(fl);
        rows.push_back(std::move(r));
    }
    return rows;
}

int run_validate(const RunConfig& config) {
    const Manifest manifest = load_manifest(config.manifest_path);
    int findings = 0;
    auto finding = [&findings](const std::string& city, const std::string& what) {
        std::cerr << "FINDING " << city << ": " << what << "\n";
        ++findings;
    };
    for (const auto& rec : manifest.cities) {
        std::vector<std::filesystem::path> paths = rec.ndvi_paths;
        paths.insert(paths.end(), rec.lst_paths.begin(), rec.lst_paths.end());
        paths.push_back(rec.pop_path);
        paths.push_back(rec.water_path);
        if (rec.qa_path) paths.push_back(*rec.qa_path);
        bool missing = false;
        for (const auto& p : paths) {
            if (!std::filesystem::exists(p)) {
                finding(rec.city_id, "missing raster " + p.string());
                missing = true;
            }
        }
        if (missing) continue;
        try {
            ResolvedCity city = resolve_city(rec);
            MaskDiagnostics diag;
            const Grid* qa = city.inputs.qa ? &*city.inputs.qa : nullptr;
            apply_masks(*city.ndvi, *city.lst, city.inputs.water_frac, qa, &diag);
            std::cout << rec.city_id << ": n_valid=" << diag.n_valid
                      << " removed_water=" << diag.removed_water
                      << " removed_qa=" << diag.removed_qa
                      << " removed_ndvi_negative=" << diag.removed_ndvi_negative << "\n";
            if (diag.n_valid < config.min_valid_cells)
                finding(rec.city_id, "only " + std::to_string(diag.n_valid) +
                                         " valid cells, below minimum " +
                                         std::to_string(config.min_valid_cells));
        } catch (const Error& e) {
            finding(rec.city_id, e.what());
        }
    }
    if (findings == 0) std::cout << "validation clean: " << manifest.cities.size()
                                 << " cities\n";
    return findings == 0 ? 0 : 1;
}

int run_compute(const RunConfig& config) {
    const Manifest manifest = load_manifest(config.manifest_path);
    std::filesystem::create_directories(config.out_dir);

    MetricsConfig mcfg;
    mcfg.reference = config.reference;
    mcfg.min_valid_cells = config.min_valid_cells;

    struct JobResult {
        std::optional<CityMetrics> metrics;
        int n_valid = 0;
        std::string error;  // empty when the city succeeded
        bool size_filtered = false;
    };
    const int n = static_cast<int>(manifest.cities.size());
    std::vector<JobResult> results(n);

    parallel_for(n, config.parallelism, [&](int i) {
        const CityRecord& rec = manifest.cities[i];
        JobResult& out = results[i];
        try {
            ResolvedCity city = resolve_city(rec);
            out.n_valid = city.valid.n();
            if (out.n_valid < config.min_valid_cells) {
                out.size_filtered = true;
                return;
            }
            out.metrics = city_metrics(city.inputs, rec, mcfg);
            if (config.emit_local_maps) {
                auto [reg, ce] = cooling_efficiency(*city.lst, *city.ndvi, city.valid);
                CapacityResult cap =
                    cooling_capacity(*city.ndvi, city.valid, -reg.slope, mcfg.reference);
                BenefitResult ben = cooling_benefit(cap.local_cc, city.inputs.pop, city.valid);
                std::filesystem::create_directories(config.out_dir / "maps");
                write_ascii_grid(cap.local_cc,
                                 config.out_dir / "maps" / (rec.city_id + "_local_cc.asc"));
                write_ascii_grid(ben.local_cb,
                                 config.out_dir / "maps" / (rec.city_id + "_local_cb.asc"));
            }
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    });

    std::vector<CityMetrics> rows;
    std::vector<std::pair<std::string, std::string>> errors;       // city_id, message
    std::vector<std::pair<std::string, int>> filtered;             // city_id, n_valid
    for (int i = 0; i < n; ++i) {
        const auto& rec = manifest.cities[i];
        if (!results[i].error.empty())
            errors.emplace_back(rec.city_id, results[i].error);
        else if (results[i].size_filtered)
            filtered.emplace_back(rec.city_id, results[i].n_valid);
        else
            rows.push_back(std::move(*results[i].metrics));
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.city_id < b.city_id; });
    write_metrics_csv(rows, config.out_dir / "metrics.csv");

    std::sort(errors.begin(), errors.end());
    std::sort(filtered.begin(), filtered.end());
    std::ofstream ef(config.out_dir / "errors.csv");
    if (!ef) throw IoError("cannot write errors.csv");
    ef << "city_id,kind,detail\n";
    for (const auto& [id, nv] : filtered)
        ef << id << ",size_filtered," << nv << " valid cells\n";
    for (const auto& [id, msg] : errors) ef << id << ",error," << csv_field(msg) << "\n";

    std::cout << "computed " << rows.size() << " cities, " << filtered.size()
              << " size-filtered, " << errors.size() << " failed\n";
    return errors.empty() ? 0 : 1;
}

int run_gini(const RunConfig& config) {
    const Manifest manifest = load_manifest(config.manifest_path);
    const auto rows = read_metrics_csv(config.out_dir / "metrics.csv");

    std::map<std::string, const CityRecord*> by_id;
    for (const auto& c : manifest.cities) by_id[c.city_id] = &c;

    const std::vector<std::string> subsets = {"all", "north", "south"};
    const std::vector<std::string> metric_names = {"cc",     "cb",     "cb_3km",
                                                   "cb_5km", "cc_rel", "cb_rel"};
    auto metric_value = [](const MetricsRow& r, const std::string& name) {
        if (name == "cc") return r.cc;
        if (name == "cb") return r.cb;
        if (name == "cb_3km") return r.cb_3km;
        if (name == "cb_5km") return r.cb_5km;
        if (name == "cc_rel") return r.cc_rel;
        return r.cb_rel;
    };

    std::ofstream out(config.out_dir / "gini.csv");
    if (!out) throw IoError("cannot write gini.csv");
    out << "subset,metric,scheme,n,gini\n";

    for (const auto& subset : subsets) {
        for (const auto& metric : metric_names) {
            for (WeightScheme scheme : config.schemes) {
                std::vector<double> values, weights;
                std::vector<std::string> labels;
                for (const auto& r : rows) {
                    const auto it = by_id.find(r.city_id);
                    if (it == by_id.end())
                        throw ConfigError("metrics city " + r.city_id +
                                          " missing from manifest");
                    const CityRecord& rec = *it->second;
                    if (subset == "north" && rec.global_region != GlobalRegion::north)
                        continue;
                    if (subset == "south" && rec.global_region != GlobalRegion::south)
                        continue;
                    double v = metric_value(r, metric);
                    if (std::isnan(v)) continue;
                    if (v < 0.0) {
                        if (config.exclude_negative_ce) continue;
                        v = 0.0;  // clamp alternative
                    }
                    double w = 1.0;
                    if (scheme == WeightScheme::population_density)
                        w = rec.population_density();
                    else if (scheme == WeightScheme::population_size)
                        w = rec.population;
                    if (!(w > 0.0)) continue;
                    values.push_back(v);
                    weights.push_back(w);
                    labels.push_back(r.city_id);
                }
                const std::string stem =
                    "lorenz_" + subset + "_" + metric + "_" + to_string(scheme);
                if (values.empty()) {
                    std::cerr << "warning: empty subset for " << stem << ", skipped\n";
                    continue;
                }
                double g;
                LorenzCurve curve;
                try {
                    curve = lorenz_curve(values, weights, labels);
                    g = gini(values, weights);
                } catch (const DegenerateInput&) {
                    std::cerr << "warning: degenerate values for " << stem
                              << ", skipped\n";
                    continue;
                }
                out << subset << ',' << metric << ',' << to_string(scheme) << ','
                    << values.size() << ',' << fmt_g17(g) << "\n";
                write_lorenz_csv(curve, config.out_dir / (stem + ".csv"));
                if (config.emit_lorenz_svg)
                    write_lorenz_svg(curve, config.out_dir / (stem + ".svg"));
            }
        }
    }
    return 0;
}

int run_scenario(const RunConfig& config) {
    const Manifest manifest = load_manifest(config.manifest_path);
    std::filesystem::create_directories(config.out_dir);

    const int n = static_cast<int>(manifest.cities.size());
    struct JobResult {
        std::optional<ScenarioCityData> data;
        std::string error;
        bool skipped = false;
    };
    std::vector<JobResult> results(n);

    parallel_for(n, config.parallelism, [&](int i) {
        const CityRecord& rec = manifest.cities[i];
        JobResult& out = results[i];
        try {
            ResolvedCity city = resolve_city(rec);
            if (city.valid.n() < config.min_valid_cells) {
                out.skipped = true;
                return;
            }
            auto [reg, ce] = cooling_efficiency(*city.lst, *city.ndvi, city.valid);
            if (config.exclude_negative_ce && reg.slope > 0.0) {
                out.skipped = true;
                return;
            }
            ScenarioCityData d;
            d.record = rec;
            d.ndvi = *city.ndvi;
            d.pop = city.inputs.pop;
            d.valid = city.valid;
            d.ce = ce;
            d.slope_magnitude = -reg.slope;
            double mn = d.ndvi.values[city.valid.indices.front()];
            double mx = mn;
            for (int idx : city.valid.indices) {
                mn = std::min(mn, d.ndvi.values[idx]);
                mx = std::max(mx, d.ndvi.values[idx]);
            }
            d.min_ndvi = mn;
            d.max_ndvi = mx;
            CapacityResult cap = cooling_capacity(d.ndvi, d.valid, d.slope_magnitude,
                                                  config.reference);
            d.baseline_cc = cap.cc;
            d.baseline_cb = cooling_benefit(cap.local_cc, d.pop, d.valid).cb;
            out.data = std::move(d);
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    });

    std::vector<ScenarioCityData> cities;
    int failed = 0;
    for (int i = 0; i < n; ++i) {
        if (!results[i].error.empty()) {
            std::cerr << "error: " << manifest.cities[i].city_id << ": "
                      << results[i].error << "\n";
            ++failed;
        } else if (results[i].data) {
            cities.push_back(std::move(*results[i].data));
        }
    }
    std::sort(cities.begin(), cities.end(), [](const auto& a, const auto& b) {
        return a.record.city_id < b.record.city_id;
    });
    if (cities.empty()) throw DataError("no cities eligible for scenario analysis");

    const RegionalBounds bounds = regional_upper_bounds(cities);

    std::ofstream cf(config.out_dir / "scenario_city.csv");
    std::ofstream af(config.out_dir / "scenario_aggregate.csv");
    if (!cf || !af) throw IoError("cannot write scenario csvs");
    cf << "city_id,percentile,mode,idealize,baseline_cc,baseline_cb,potential_cc,"
          "potential_cb\n";
    af << "percentile,mode,idealize,"
          "cc_q025,cc_q25,cc_median,cc_q75,cc_q975,"
          "cb_q025,cb_q25,cb_median,cb_q75,cb_q975,"
          "gini_cc_unweighted,gini_cc_density,gini_cc_size,"
          "gini_cb_unweighted,gini_cb_density,gini_cb_size\n";

    std::map<std::string, std::pair<double, double>> baselines;
    for (const auto& c : cities)
        baselines[c.record.city_id] = {c.baseline_cc, c.baseline_cb};

    for (ScenarioMode mode : config.modes) {
        for (bool idealize : config.idealize_options) {
            ScenarioConfig scfg;
            scfg.percentiles = config.percentiles;
            scfg.mode = mode;
            scfg.idealize = idealize;
            scfg.reference = config.reference;
            const ScenarioResult result = scenario_run(cities, bounds, scfg);
            for (const auto& r : result.rows) {
                const auto& [bcc, bcb] = baselines.at(r.city_id);
                cf << r.city_id << ',' << r.percentile << ',' << to_string(r.mode) << ','
                   << (r.idealize ? 1 : 0) << ',' << fmt_g17(bcc) << ',' << fmt_g17(bcb)
                   << ',' << fmt_g17(r.potential_cc) << ',' << fmt_g17(r.potential_cb)
                   << "\n";
            }
            for (const auto& a : result.aggregates) {
                af << a.percentile << ',' << to_string(a.mode) << ','
                   << (a.idealize ? 1 : 0) << ',' << fmt_g17(a.cc_q025) << ','
                   << fmt_g17(a.cc_q25) << ',' << fmt_g17(a.cc_median) << ','
                   << fmt_g17(a.cc_q75) << ',' << fmt_g17(a.cc_q975) << ','
                   << fmt_g17(a.cb_q025) << ',' << fmt_g17(a.cb_q25) << ','
                   << fmt_g17(a.cb_median) << ',' << fmt_g17(a.cb_q75) << ','
                   << fmt_g17(a.cb_q975) << ',' << fmt_g17(a.gini_cc[0]) << ','
                   << fmt_g17(a.gini_cc[1]) << ',' << fmt_g17(a.gini_cc[2]) << ','
                   << fmt_g17(a.gini_cb[0]) << ',' << fmt_g17(a.gini_cb[1]) << ','
                   << fmt_g17(a.gini_cb[2]) << "\n";
            }
        }
    }
    std::cout << "scenario sweep over " << cities.size() << " cities done\n";
    return failed == 0 ? 0 : 1;
}

int run_synth(const SynthSpec& spec, const std::filesystem::path& outdir) {
    const SynthCorpus corpus = generate_corpus(spec, outdir);
    std::cout << "wrote " << corpus.manifest_path.string() << " and "
              << corpus.truth_path.string() << "\n";
    return 0;
}

}  // namespace urbancool
