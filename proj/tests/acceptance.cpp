// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "urbancool/csv.hpp"
#include "urbancool/pipeline.hpp"

using namespace urbancool;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << name;
    if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

fs::path work_dir() {
    auto p = fs::temp_directory_path() / "urbancool_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Grid grid_from(const std::vector<double>& vals, int nrows, int ncols) {
    GridHeader h;
    h.ncols = ncols;
    h.nrows = nrows;
    Grid g = Grid::constant(h, 0.0);
    for (int i = 0; i < nrows * ncols; ++i) g.values[i] = vals[static_cast<size_t>(i)];
    return g;
}

ValidCellSet all_cells(const Grid& g) {
    ValidCellSet s;
    for (int i = 0; i < g.size(); ++i) s.indices.push_back(i);
    return s;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(URBANCOOL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

// ---- criterion 1: slope recovery -------------------------------------------

void criterion_slope_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> mag(1.0, 30.0);
    std::uniform_real_distribution<double> icept(-50.0, 50.0);
    std::uniform_real_distribution<double> x(0.0, 1.0);

    bool exact_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const double b = (trial % 2 ? 1.0 : -1.0) * mag(rng);
        const double a = icept(rng);
        const int n = 500;
        std::vector<double> nv(n), lv(n);
        for (int i = 0; i < n; ++i) {
            nv[i] = x(rng);
            lv[i] = a + b * nv[i];
        }
        Grid ndvi = grid_from(nv, 20, 25);
        Grid lst = grid_from(lv, 20, 25);
        auto [reg, ce] = cooling_efficiency(lst, ndvi, all_cells(ndvi));
        if (std::abs(reg.slope - b) > 1e-9 * std::abs(b)) exact_ok = false;
    }

    int within = 0;
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        const double b = (trial % 2 ? 1.0 : -1.0) * mag(rng);
        const double a = icept(rng);
        const int n = 10000;
        std::vector<double> xs(n), ys(n);
        double sx = 0;
        for (int i = 0; i < n; ++i) {
            xs[i] = x(rng);
            ys[i] = a + b * xs[i] + noise(rng);
            sx += xs[i];
        }
        auto reg = ols_fit(xs, ys);
        // standard error of the slope from the residuals
        const double mx = sx / n;
        double sxx = 0, sse = 0;
        for (int i = 0; i < n; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            const double resid = ys[i] - (reg.intercept + reg.slope * xs[i]);
            sse += resid * resid;
        }
        const double se = std::sqrt((sse / (n - 2)) / sxx);
        if (std::abs(reg.slope - b) <= 3.0 * se) ++within;
    }
    const double secs = elapsed_s(t0);
    report(1, "slope recovery",
           exact_ok && within >= 99 && secs < 10.0,
           "exact=" + std::string(exact_ok ? "ok" : "bad") + " within3se=" +
               std::to_string(within) + "/100 time=" + std::to_string(secs) + "s");
}

// ---- criteria 2, 6, 7, 8, 9, 10 need corpora -------------------------------

void criterion_oracle_equivalence(const fs::path& base) {
    SynthSpec spec;
    spec.n_cities = 20;
    spec.nrows = 10;
    spec.ncols = 10;
    spec.seed = 2024;

    bool ok = true;
    std::string detail;

    // uniform population: cc/cb vs sidecar, cb == cc bitwise
    {
        const fs::path dir = base / "oracle_uniform";
        SynthCorpus corpus = generate_corpus(spec, dir);
        RunConfig cfg;
        cfg.manifest_path = dir / "manifest.csv";
        cfg.out_dir = dir / "out";
        if (run_compute(cfg) != 0) ok = false;
        auto rows = read_metrics_csv(cfg.out_dir / "metrics.csv");
        if (rows.size() != corpus.truth.size()) ok = false;
        for (size_t i = 0; i < rows.size() && ok; ++i) {
            const auto& t = corpus.truth[i];
            if (std::abs(rows[i].cc - t.cc_truth) > 1e-9 * std::abs(t.cc_truth)) {
                ok = false;
                detail = rows[i].city_id + " cc mismatch";
            }
            if (rows[i].cb != rows[i].cc) {
                ok = false;
                detail = rows[i].city_id + " cb != cc bitwise";
            }
        }
    }

    // non-uniform population: cb vs sidecar
    {
        const fs::path dir = base / "oracle_anti";
        SynthSpec s2 = spec;
        s2.pop_model = PopModel::anti_ndvi;
        SynthCorpus corpus = generate_corpus(s2, dir);
        RunConfig cfg;
        cfg.manifest_path = dir / "manifest.csv";
        cfg.out_dir = dir / "out";
        if (run_compute(cfg) != 0) ok = false;
        auto rows = read_metrics_csv(cfg.out_dir / "metrics.csv");
        for (size_t i = 0; i < rows.size() && ok; ++i) {
            const auto& t = corpus.truth[i];
            if (std::abs(rows[i].cb - t.cb_truth) > 1e-9 * std::abs(t.cb_truth)) {
                ok = false;
                detail = rows[i].city_id + " cb mismatch";
            }
        }
    }
    report(2, "Eq. 1/2 synthetic oracle", ok, detail);
}

void criterion_relative_cooling() {
    bool ok = std::abs(relative_cooling(2.0, 34.0) - 2.0 / 11.0) <= 1e-12 &&
              std::abs(relative_cooling(2.0, 18.0) - 2.0 / 27.0) <= 1e-12;
    bool threw = false;
    try {
        relative_cooling(1.0, 44.8, 45.0);
    } catch (const NearLimitError&) {
        threw = true;
    }
    report(3, "Eq. 3 relative cooling", ok && threw);
}

void criterion_gini_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> nn(1, 200);
    std::uniform_real_distribution<double> val(0.0, 100.0);
    std::uniform_real_distribution<double> wt(0.01, 10.0);
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const int n = nn(rng);
        std::vector<double> v(n), w(n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            v[i] = val(rng);
            w[i] = wt(rng);
            nonzero = nonzero || v[i] > 0;
        }
        if (!nonzero) v[0] = 1.0;
        if (std::abs(gini(v, w) - gini_brute_force(v, w)) > 1e-12) ok = false;
        if (trial < 50) {  // scale invariances on a subsample
            std::vector<double> v2 = v, w2 = w;
            for (auto& e : v2) e *= 17.0;
            for (auto& e : w2) e *= 0.3;
            if (std::abs(gini(v2, w) - gini(v, w)) > 1e-12) ok = false;
            if (std::abs(gini(v, w2) - gini(v, w)) > 1e-12) ok = false;
        }
    }
    const std::vector<double> pair13 = {1, 3}, ones2 = {1, 1};
    const std::vector<double> eq = {4, 4, 4}, w3 = {1, 2, 3};
    ok = ok && std::abs(gini(pair13, ones2) - 0.25) <= 1e-12;
    ok = ok && std::abs(gini(eq, w3)) <= 1e-15;
    const double secs = elapsed_s(t0);
    report(4, "Gini trapezoid vs pairwise oracle", ok && secs < 5.0,
           "time=" + std::to_string(secs) + "s");
}

void criterion_rearrangement() {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> nv(0.0, 1.0);
    std::uniform_real_distribution<double> pv(0.1, 10.0);
    bool ok = true;

    // exhaustive for <= 6 cells
    for (int trial = 0; trial < 60 && ok; ++trial) {
        const int n = 2 + trial % 5;
        std::vector<double> ndvi(n), pop(n);
        for (int i = 0; i < n; ++i) {
            ndvi[i] = nv(rng);
            pop[i] = pv(rng);
        }
        auto pairs = idealize_distribution(ndvi, pop);
        double ideal = 0, total = 0;
        for (const auto& [p, v] : pairs) {
            ideal += p * v;
            total += p;
        }
        ideal /= total;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            double cb = 0;
            for (int i = 0; i < n; ++i) cb += pop[i] * ndvi[perm[i]];
            if (cb / total > ideal + 1e-12) ok = false;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    // 100 larger instances: idealized >= actual pairing
    int dominated = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 100;
        std::vector<double> ndvi(n), pop(n);
        for (int i = 0; i < n; ++i) {
            ndvi[i] = nv(rng);
            pop[i] = pv(rng);
        }
        double actual = 0, total = 0;
        for (int i = 0; i < n; ++i) {
            actual += pop[i] * ndvi[i];
            total += pop[i];
        }
        actual /= total;
        auto pairs = idealize_distribution(ndvi, pop);
        double ideal = 0;
        for (const auto& [p, v] : pairs) ideal += p * v;
        ideal /= total;
        if (ideal >= actual - 1e-12) ++dominated;
    }
    report(5, "rearrangement dominance", ok && dominated == 100,
           "dominated=" + std::to_string(dominated) + "/100");
}

void criterion_scenario_sweep(const fs::path& base) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = base / "scenario";
    SynthSpec spec;
    spec.n_cities = 20;
    spec.nrows = 10;
    spec.ncols = 10;
    spec.seed = 7;
    generate_corpus(spec, dir);

    RunConfig cfg;
    cfg.manifest_path = dir / "manifest.csv";
    cfg.out_dir = dir / "out";
    bool ok = run_compute(cfg) == 0 && run_scenario(cfg) == 0;
    std::string detail = ok ? "" : "pipeline stage failed";

    // parse scenario_city.csv: city -> mode -> percentile -> (cc, cb)
    std::map<std::string, std::map<std::string, std::map<int, std::pair<double, double>>>>
        table;
    if (ok) {
        std::ifstream in(cfg.out_dir / "scenario_city.csv");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            const auto f = split_csv_line(line);
            table[f[0]][f[2]][std::stoi(f[1])] = {std::stod(f[6]), std::stod(f[7])};
        }
        for (const auto& [city, by_mode] : table) {
            for (const auto& [mode, by_p] : by_mode) {
                double prev_cc = -1e300, prev_cb = -1e300;
                for (const auto& [p, vals] : by_p) {
                    if (vals.first < prev_cc - 1e-12 || vals.second < prev_cb - 1e-12) {
                        ok = false;
                        detail = city + " " + mode + " not monotone in percentile";
                    }
                    prev_cc = vals.first;
                    prev_cb = vals.second;
                }
            }
            for (const auto& [p, both] : by_mode.at("both")) {
                const auto& nd = by_mode.at("ndvi").at(p);
                const auto& ce = by_mode.at("ce").at(p);
                if (both.first < std::max(nd.first, ce.first) - 1e-12 ||
                    both.second < std::max(nd.second, ce.second) - 1e-12) {
                    ok = false;
                    detail = city + " both-mode not dominant at p=" + std::to_string(p);
                }
            }
        }
    }

    // no-op reproduction: a city whose cells all sit above the regional target
    // and whose ce is the regional max must reproduce its baseline byte-wise
    if (ok) {
        const fs::path ndir = base / "noop";
        fs::create_directories(ndir / "rasters");
        GridHeader h;
        h.ncols = 8;
        h.nrows = 8;
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> hi(0.5, 0.9);
        std::uniform_real_distribution<double> lo(0.1, 0.3);

        Manifest man;
        auto add_city = [&](const std::string& id, Koppen koppen, bool high,
                            double slope_mag) {
            Grid ndvi = Grid::constant(h, 0.0);
            for (int i = 0; i < ndvi.size(); ++i)
                ndvi.values[i] = high ? hi(rng) : lo(rng);
            Grid lst = Grid::constant(h, 0.0);
            for (int i = 0; i < lst.size(); ++i)
                lst.values[i] = 40.0 - slope_mag * ndvi.values[i];
            Grid pop = Grid::constant(h, 100.0);
            Grid water = Grid::constant(h, 0.0);
            write_ascii_grid(ndvi, ndir / "rasters" / (id + "_ndvi.asc"));
            write_ascii_grid(lst, ndir / "rasters" / (id + "_lst.asc"));
            write_ascii_grid(pop, ndir / "rasters" / (id + "_pop.asc"));
            write_ascii_grid(water, ndir / "rasters" / (id + "_water.asc"));
            CityRecord rec;
            rec.city_id = id;
            rec.name = id;
            rec.country = "X";
            rec.koppen = koppen;
            rec.area_km2 = 64;
            rec.population = 6400;
            rec.ndvi_paths = {fs::path("rasters") / (id + "_ndvi.asc")};
            rec.lst_paths = {fs::path("rasters") / (id + "_lst.asc")};
            rec.pop_path = fs::path("rasters") / (id + "_pop.asc");
            rec.water_path = fs::path("rasters") / (id + "_water.asc");
            man.cities.push_back(rec);
        };
        // "anchor": highest ce and all cells above the p50 target of its region
        add_city("anchor", Koppen::tropical, true, 20.0);
        add_city("low1", Koppen::tropical, false, 5.0);
        add_city("low2", Koppen::tropical, false, 5.0);
        add_city("other", Koppen::temperate, true, 10.0);
        save_manifest(man, ndir / "manifest.csv");

        RunConfig ncfg;
        ncfg.manifest_path = ndir / "manifest.csv";
        ncfg.out_dir = ndir / "out";
        ncfg.percentiles = {50};
        if (run_compute(ncfg) != 0 || run_scenario(ncfg) != 0) {
            ok = false;
            detail = "no-op corpus pipeline failed";
        } else {
            std::ifstream in(ncfg.out_dir / "scenario_city.csv");
            std::string line;
            std::getline(in, line);
            bool found = false;
            while (std::getline(in, line)) {
                const auto f = split_csv_line(line);
                if (f[0] == "anchor") {
                    found = true;
                    // baseline_cc/cb columns vs potential columns, byte-wise
                    if (f[4] != f[6] || f[5] != f[7]) {
                        ok = false;
                        detail = "anchor potential differs from baseline: " + line;
                    }
                }
            }
            if (!found) {
                ok = false;
                detail = "anchor city missing from scenario output";
            }
        }
    }

    const double secs = elapsed_s(t0);
    report(6, "scenario monotonicity/dominance/no-op", ok && secs < 30.0,
           detail + " time=" + std::to_string(secs) + "s");
}

void criterion_reference_shift(const fs::path& base) {
    const fs::path dir = base / "refshift";
    SynthSpec spec;
    spec.n_cities = 20;
    spec.nrows = 10;
    spec.ncols = 10;
    spec.seed = 11;
    spec.ndvi_model = NdviModel::clustered;
    generate_corpus(spec, dir);

    RunConfig cmin;
    cmin.manifest_path = dir / "manifest.csv";
    cmin.out_dir = dir / "out_min";
    RunConfig czero = cmin;
    czero.out_dir = dir / "out_zero";
    czero.reference = Reference::zero;

    bool ok = run_compute(cmin) == 0 && run_compute(czero) == 0;
    std::string detail;
    if (ok) {
        auto a = read_metrics_csv(cmin.out_dir / "metrics.csv");
        auto b = read_metrics_csv(czero.out_dir / "metrics.csv");
        for (size_t i = 0; i < a.size(); ++i) {
            const double expected = a[i].min_ndvi * (-a[i].slope);
            const double got = b[i].cc - a[i].cc;
            if (std::abs(got - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
                ok = false;
                detail = a[i].city_id;
                break;
            }
        }
    }
    report(7, "reference-shift identity", ok, detail);
}

void criterion_determinism(const fs::path& base) {
    const fs::path dir = base / "determinism";
    bool ok = run_cli("synth --out " + dir.string() + " --cities 20 --rows 10 --cols 10 --seed 3") == 0;
    ok = ok && run_cli("compute --manifest " + (dir / "manifest.csv").string() +
                       " --out " + (dir / "out1").string() + " --parallelism 1") == 0;
    ok = ok && run_cli("compute --manifest " + (dir / "manifest.csv").string() +
                       " --out " + (dir / "out8").string() + " --parallelism 8") == 0;
    ok = ok && !slurp(dir / "out1" / "metrics.csv").empty() &&
         slurp(dir / "out1" / "metrics.csv") == slurp(dir / "out8" / "metrics.csv");
    report(8, "determinism across parallelism", ok);
}

void criterion_multiscale() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> nv(0.05, 0.9);
    std::uniform_real_distribution<double> pv(1.0, 500.0);
    std::vector<double> ndvi_vals(64), pop_vals(64);
    for (int i = 0; i < 64; ++i) {
        ndvi_vals[i] = nv(rng);
        pop_vals[i] = pv(rng);
    }
    Grid ndvi = grid_from(ndvi_vals, 8, 8);
    Grid pop = grid_from(pop_vals, 8, 8);
    ValidCellSet valid = all_cells(ndvi);

    CapacityResult cap = cooling_capacity(ndvi, valid, 12.0);
    const double cb = cooling_benefit(cap.local_cc, pop, valid).cb;
    bool ok = multiscale_benefit(ndvi, valid, 12.0, Reference::city_min, pop, 1) == cb;

    Grid flat = grid_from(std::vector<double>(64, 0.4), 8, 8);
    CapacityResult fcap = cooling_capacity(flat, valid, 12.0);
    const double fcb = cooling_benefit(fcap.local_cc, pop, valid).cb;
    const double f3 = multiscale_benefit(flat, valid, 12.0, Reference::city_min, pop, 3);
    const double f5 = multiscale_benefit(flat, valid, 12.0, Reference::city_min, pop, 5);
    ok = ok && f3 == fcb && f5 == fcb;
    report(9, "multiscale consistency", ok);
}

void criterion_smoke(const fs::path& base) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = base / "smoke";
    const std::string man = (dir / "manifest.csv").string();
    const std::string out = (dir / "out").string();
    bool ok = run_cli("synth --out " + dir.string() +
                      " --cities 20 --rows 10 --cols 10 --seed 42") == 0;
    ok = ok && run_cli("validate --manifest " + man + " --out " + out) == 0;
    ok = ok && run_cli("compute --manifest " + man + " --out " + out +
                       " --parallelism 4") == 0;
    ok = ok && run_cli("gini --manifest " + man + " --out " + out) == 0;
    ok = ok && run_cli("scenario --manifest " + man + " --out " + out +
                       " --parallelism 4 --idealize both") == 0;
    const double secs = elapsed_s(t0);
    report(10, "end-to-end smoke", ok && secs < 60.0,
           "time=" + std::to_string(secs) + "s");
}

}  // namespace

int main() {
    const fs::path base = work_dir();
    criterion_slope_recovery();
    criterion_oracle_equivalence(base);
    criterion_relative_cooling();
    criterion_gini_oracle();
    criterion_rearrangement();
    criterion_scenario_sweep(base);
    criterion_reference_shift(base);
    criterion_determinism(base);
    criterion_multiscale();
    criterion_smoke(base);
    if (g_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " criteria failed\n";
    return 1;
}
