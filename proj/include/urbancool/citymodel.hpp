#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urbancool/errors.hpp"

namespace urbancool {

enum class GlobalRegion { north, south };
enum class Koppen { tropical, arid, temperate, continental };

std::string to_string(GlobalRegion r);
std::string to_string(Koppen k);
GlobalRegion parse_global_region(const std::string& s);
Koppen parse_koppen(const std::string& s);

struct CityRecord {
    std::string city_id;
    std::string name;
    std::string country;
    GlobalRegion global_region = GlobalRegion::north;
    std::string continent;
    Koppen koppen = Koppen::temperate;
    double area_km2 = 0.0;
    double population = 0.0;
    double gdp_per_capita = 0.0;
    double mat = 0.0;        // mean annual temperature, degC
    double map_mm = 0.0;     // mean annual precipitation, mm
    double elev_range = 0.0; // m
    std::vector<std::filesystem::path> ndvi_paths;  // 12 monthly or 1 hottest
    std::vector<std::filesystem::path> lst_paths;
    std::filesystem::path pop_path;
    std::filesystem::path water_path;
    std::optional<std::filesystem::path> qa_path;

    double population_density() const { return population / area_km2; }
};

struct Manifest {
    std::vector<CityRecord> cities;
    std::filesystem::path source;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

struct SizeFilterReport {
    // (city_id, n_valid) for each rejected city
    std::vector<std::pair<std::string, int>> rejected;
};

/// Drop cities whose valid-cell count is below min_valid_cells.
Manifest size_filter(const Manifest& manifest,
                     const std::map<std::string, int>& valid_counts,
                     int min_valid_cells, SizeFilterReport* report = nullptr);

}  // namespace urbancool
