#include "urbancool/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace urbancool {

namespace {

const char* const kHeaderKeys[6] = {"NCOLS", "NROWS",    "XLLCORNER",
                                    "YLLCORNER", "CELLSIZE", "NODATA_VALUE"};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

double parse_double(const std::string& tok, int line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("non-numeric token '" + tok + "' at line " + std::to_string(line_no));
    return v;
}

}  // namespace

Grid Grid::constant(const GridHeader& h, double value) {
    Grid g;
    g.header = h;
    g.values = Eigen::ArrayXd::Constant(h.ncols * h.nrows, value);
    g.valid = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(h.ncols * h.nrows, true);
    return g;
}

Grid read_ascii_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    GridHeader h;
    double header_vals[6];
    std::string line;
    int line_no = 0;
    for (int k = 0; k < 6; ++k) {
        if (!std::getline(in, line))
            throw ParseError("truncated header at line " + std::to_string(line_no + 1));
        ++line_no;
        std::istringstream ls(line);
        std::string key, val, extra;
        if (!(ls >> key >> val) || (ls >> extra))
            throw ParseError("malformed header at line " + std::to_string(line_no));
        if (upper(key) != kHeaderKeys[k])
            throw ParseError("expected header key " + std::string(kHeaderKeys[k]) +
                             " at line " + std::to_string(line_no) + ", got '" + key + "'");
        header_vals[k] = parse_double(val, line_no);
    }
    h.ncols = static_cast<int>(header_vals[0]);
    h.nrows = static_cast<int>(header_vals[1]);
    h.xllcorner = header_vals[2];
    h.yllcorner = header_vals[3];
    h.cellsize = header_vals[4];
    h.nodata_value = header_vals[5];
    if (h.ncols < 1 || h.nrows < 1)
        throw ParseError("ncols/nrows must be >= 1 (line 1-2)");
    if (!(h.cellsize > 0.0)) throw ParseError("cellsize must be > 0 (line 5)");

    const int n = h.ncols * h.nrows;
    Grid g;
    g.header = h;
    g.values = Eigen::ArrayXd::Constant(n, h.nodata_value);
    g.valid = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, false);

    int count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            if (count >= n)
                throw ShapeError("too many data values: expected " + std::to_string(n));
            const double v = parse_double(tok, line_no);
            g.values[count] = v;
            g.valid[count] = (v != h.nodata_value) && std::isfinite(v);
            if (!g.valid[count]) g.values[count] = h.nodata_value;
            ++count;
        }
    }
    if (count != n)
        throw ShapeError("expected " + std::to_string(n) + " data values, got " +
                         std::to_string(count));
    return g;
}

void write_ascii_grid(const Grid& grid, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());

    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "NCOLS " << grid.header.ncols << "\n";
    out << "NROWS " << grid.header.nrows << "\n";
    out << "XLLCORNER " << fmt(grid.header.xllcorner) << "\n";
    out << "YLLCORNER " << fmt(grid.header.yllcorner) << "\n";
    out << "CELLSIZE " << fmt(grid.header.cellsize) << "\n";
    out << "NODATA_VALUE " << fmt(grid.header.nodata_value) << "\n";
    for (int r = 0; r < grid.header.nrows; ++r) {
        for (int c = 0; c < grid.header.ncols; ++c) {
            const int i = r * grid.header.ncols + c;
            if (c) out << ' ';
            out << fmt(grid.valid[i] ? grid.values[i] : grid.header.nodata_value);
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void align_check(const std::vector<const Grid*>& grids) {
    if (grids.empty()) throw ArgumentError("align_check: empty grid list");
    const GridHeader& ref = grids.front()->header;
    auto rel_eq = [](double a, double b) {
        const double scale = std::max({std::abs(a), std::abs(b), 1.0});
        return std::abs(a - b) <= 1e-9 * scale;
    };
    for (size_t k = 1; k < grids.size(); ++k) {
        const GridHeader& h = grids[k]->header;
        const std::string where = "grid " + std::to_string(k);
        if (h.ncols != ref.ncols) throw AlignmentError(where + ": ncols mismatch");
        if (h.nrows != ref.nrows) throw AlignmentError(where + ": nrows mismatch");
        if (!rel_eq(h.xllcorner, ref.xllcorner))
            throw AlignmentError(where + ": xllcorner mismatch");
        if (!rel_eq(h.yllcorner, ref.yllcorner))
            throw AlignmentError(where + ": yllcorner mismatch");
        if (!rel_eq(h.cellsize, ref.cellsize))
            throw AlignmentError(where + ": cellsize mismatch");
    }
}

ValidCellSet apply_masks(const Grid& ndvi, const Grid& lst, const Grid& water_frac,
                         const Grid* qa, MaskDiagnostics* diag) {
    std::vector<const Grid*> all = {&ndvi, &lst, &water_frac};
    if (qa) all.push_back(qa);
    align_check(all);

    MaskDiagnostics d;
    ValidCellSet set;
    for (int i = 0; i < ndvi.size(); ++i) {
        if (!ndvi.valid[i] || !lst.valid[i]) continue;
        ++d.n_input_valid;
        if (!water_frac.valid[i] || water_frac.values[i] > 0.20) {
            ++d.removed_water;
            continue;
        }
        if (qa && (!qa->valid[i] || qa->values[i] != 1.0)) {
            ++d.removed_qa;
            continue;
        }
        if (ndvi.values[i] < 0.0) {
            ++d.removed_ndvi_negative;
            continue;
        }
        set.indices.push_back(i);
    }
    d.n_valid = set.n();
    if (diag) *diag = d;
    return set;
}

Grid neighborhood_mean(const Grid& grid, const ValidCellSet& valid, int window) {
    if (window < 1 || window % 2 == 0)
        throw ArgumentError("window must be an odd integer >= 1");
    Grid out = grid;
    if (window == 1) return out;

    // membership lookup for the mask, not just ndvi-validity
    std::vector<char> in_set(static_cast<size_t>(grid.size()), 0);
    for (int i : valid.indices) in_set[static_cast<size_t>(i)] = 1;

    const int half = window / 2;
    const int ncols = grid.header.ncols;
    const int nrows = grid.header.nrows;
    for (int i : valid.indices) {
        const int r = i / ncols;
        const int c = i % ncols;
        // mean as center + mean deviation: exact on constant fields
        const double center = grid.values[i];
        double sum = 0.0;
        int count = 0;
        for (int rr = std::max(0, r - half); rr <= std::min(nrows - 1, r + half); ++rr) {
            for (int cc = std::max(0, c - half); cc <= std::min(ncols - 1, c + half); ++cc) {
                const int j = rr * ncols + cc;
                if (in_set[static_cast<size_t>(j)]) {
                    sum += grid.values[j] - center;
                    ++count;
                }
            }
        }
        out.values[i] = center + sum / count;  // count >= 1, the center is in the set
    }
    return out;
}

}  // namespace urbancool
