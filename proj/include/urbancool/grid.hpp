#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <vector>

#include "urbancool/errors.hpp"

namespace urbancool {

/// Georeferencing header of a rectangular raster. cellsize is km per cell.
struct GridHeader {
    int ncols = 0;
    int nrows = 0;
    double xllcorner = 0.0;
    double yllcorner = 0.0;
    double cellsize = 1.0;
    double nodata_value = -9999.0;
};

/// One raster variable for one city. values is row-major (row 0 = top row of
/// the file), invalid cells hold nodata_value and valid[i] == false.
struct Grid {
    GridHeader header;
    Eigen::ArrayXd values;
    Eigen::Array<bool, Eigen::Dynamic, 1> valid;

    int size() const { return header.ncols * header.nrows; }
    int index(int row, int col) const { return row * header.ncols + col; }

    int count_valid() const {
        int n = 0;
        for (Eigen::Index i = 0; i < valid.size(); ++i) n += valid[i] ? 1 : 0;
        return n;
    }

    /// Uniform grid, every cell valid.
    static Grid constant(const GridHeader& h, double value);
};

/// Ordered indices of the cells passing every mask.
struct ValidCellSet {
    std::vector<int> indices;
    int n() const { return static_cast<int>(indices.size()); }
};

/// Per-criterion removal counts, in the order the masks are applied.
struct MaskDiagnostics {
    int n_input_valid = 0;  // valid in both ndvi and lst
    int removed_water = 0;
    int removed_qa = 0;
    int removed_ndvi_negative = 0;
    int n_valid = 0;
};

Grid read_ascii_grid(const std::filesystem::path& path);
void write_ascii_grid(const Grid& grid, const std::filesystem::path& path);

/// Throws AlignmentError naming the first mismatching grid and field.
void align_check(const std::vector<const Grid*>& grids);

/// Conjunction of: valid ndvi, valid lst, water_frac <= 0.20, ndvi >= 0,
/// and (when qa is given) qa == 1.
ValidCellSet apply_masks(const Grid& ndvi, const Grid& lst, const Grid& water_frac,
                         const Grid* qa = nullptr, MaskDiagnostics* diag = nullptr);

/// Truncated box-window mean over valid cells; invalid cells stay invalid.
Grid neighborhood_mean(const Grid& grid, const ValidCellSet& valid, int window);

}  // namespace urbancool
