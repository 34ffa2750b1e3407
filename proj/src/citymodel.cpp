#include "urbancool/citymodel.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "urbancool/csv.hpp"

namespace urbancool {

namespace {

const std::vector<std::string> kColumns = {
    "city_id",   "name",       "country",        "global_region", "continent",
    "koppen",    "area_km2",   "population",     "gdp_per_capita", "mat",
    "map_mm",    "elev_range", "ndvi_paths",     "lst_paths",      "pop_path",
    "water_path", "qa_path"};

double parse_num(const std::string& s, const std::string& field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("bad numeric value '" + s + "' in column " + field);
    return v;
}

std::vector<std::filesystem::path> parse_path_list(const std::string& s,
                                                   const std::string& field) {
    std::vector<std::filesystem::path> out;
    for (const std::string& p : split(s, ';'))
        if (!p.empty()) out.emplace_back(p);
    if (out.size() != 1 && out.size() != 12)
        throw ParseError(field + " must list 1 or 12 rasters, got " +
                         std::to_string(out.size()));
    return out;
}

std::string join_paths(const std::vector<std::filesystem::path>& paths) {
    std::string out;
    for (size_t i = 0; i < paths.size(); ++i) {
        if (i) out += ';';
        out += paths[i].string();
    }
    return out;
}

}  // namespace

std::string to_string(GlobalRegion r) {
    return r == GlobalRegion::north ? "north" : "south";
}

std::string to_string(Koppen k) {
    switch (k) {
        case Koppen::tropical: return "tropical";
        case Koppen::arid: return "arid";
        case Koppen::temperate: return "temperate";
        case Koppen::continental: return "continental";
    }
    return "temperate";
}

GlobalRegion parse_global_region(const std::string& s) {
    if (s == "north") return GlobalRegion::north;
    if (s == "south") return GlobalRegion::south;
    throw ParseError("global_region must be north or south, got '" + s + "'");
}

Koppen parse_koppen(const std::string& s) {
    if (s == "tropical") return Koppen::tropical;
    if (s == "arid") return Koppen::arid;
    if (s == "temperate") return Koppen::temperate;
    if (s == "continental") return Koppen::continental;
    throw ParseError("koppen must be one of tropical/arid/temperate/continental, got '" +
                     s + "'");
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty manifest");
    const auto header = split_csv_line(line);
    if (header != kColumns) {
        for (const auto& col : kColumns) {
            bool found = false;
            for (const auto& h : header) found = found || h == col;
            if (!found) throw SchemaError("manifest missing column " + col);
        }
        throw SchemaError("manifest columns out of order or extra columns present");
    }

    Manifest m;
    m.source = path;
    std::set<std::string> seen_ids;
    const std::filesystem::path base = path.parent_path();
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != kColumns.size())
            throw SchemaError("manifest row " + std::to_string(row) + " has " +
                              std::to_string(f.size()) + " fields, expected " +
                              std::to_string(kColumns.size()));
        CityRecord c;
        c.city_id = f[0];
        c.name = f[1];
        c.country = f[2];
        c.global_region = parse_global_region(f[3]);
        c.continent = f[4];
        c.koppen = parse_koppen(f[5]);
        c.area_km2 = parse_num(f[6], "area_km2");
        c.population = parse_num(f[7], "population");
        c.gdp_per_capita = parse_num(f[8], "gdp_per_capita");
        c.mat = parse_num(f[9], "mat");
        c.map_mm = parse_num(f[10], "map_mm");
        c.elev_range = parse_num(f[11], "elev_range");
        c.ndvi_paths = parse_path_list(f[12], "ndvi_paths");
        c.lst_paths = parse_path_list(f[13], "lst_paths");
        c.pop_path = f[14];
        c.water_path = f[15];
        if (!f[16].empty()) c.qa_path = f[16];

        if (c.city_id.empty()) throw ParseError("empty city_id at row " + std::to_string(row));
        if (!(c.area_km2 > 0.0))
            throw ParseError("area_km2 must be > 0 for city " + c.city_id);
        if (c.ndvi_paths.size() != c.lst_paths.size())
            throw ParseError("ndvi_paths and lst_paths lengths differ for city " + c.city_id);
        if (!seen_ids.insert(c.city_id).second)
            throw DuplicateError("duplicate city_id " + c.city_id);

        // relative raster paths resolve against the manifest location
        auto resolve = [&base](std::filesystem::path& p) {
            if (p.is_relative()) p = base / p;
        };
        for (auto& p : c.ndvi_paths) resolve(p);
        for (auto& p : c.lst_paths) resolve(p);
        resolve(c.pop_path);
        resolve(c.water_path);
        if (c.qa_path) resolve(*c.qa_path);

        m.cities.push_back(std::move(c));
    }
    if (m.cities.empty()) throw SchemaError("manifest has no cities");
    return m;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path.string());
    for (size_t i = 0; i < kColumns.size(); ++i)
        out << (i ? "," : "") << kColumns[i];
    out << "\n";
    for (const auto& c : manifest.cities) {
        out << csv_field(c.city_id) << ',' << csv_field(c.name) << ','
            << csv_field(c.country) << ',' << to_string(c.global_region) << ','
            << csv_field(c.continent) << ',' << to_string(c.koppen) << ','
            << fmt_g17(c.area_km2) << ',' << fmt_g17(c.population) << ','
            << fmt_g17(c.gdp_per_capita) << ',' << fmt_g17(c.mat) << ','
            << fmt_g17(c.map_mm) << ',' << fmt_g17(c.elev_range) << ','
            << csv_field(join_paths(c.ndvi_paths)) << ','
            << csv_field(join_paths(c.lst_paths)) << ','
            << csv_field(c.pop_path.string()) << ','
            << csv_field(c.water_path.string()) << ','
            << csv_field(c.qa_path ? c.qa_path->string() : "") << "\n";
    }
    if (!out) throw IoError("write failed for " + path.string());
}

Manifest size_filter(const Manifest& manifest,
                     const std::map<std::string, int>& valid_counts,
                     int min_valid_cells, SizeFilterReport* report) {
    Manifest out;
    out.source = manifest.source;
    SizeFilterReport rep;
    for (const auto& c : manifest.cities) {
        const auto it = valid_counts.find(c.city_id);
        const int n = it == valid_counts.end() ? 0 : it->second;
        if (n < min_valid_cells) {
            rep.rejected.emplace_back(c.city_id, n);
        } else {
            out.cities.push_back(c);
        }
    }
    if (report) *report = rep;
    return out;
}

}  // namespace urbancool
