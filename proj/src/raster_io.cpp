#include "backhaul/raster_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"

namespace backhaul {

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::elevation_m: return "elevation_m";
        case LayerKind::population_per_cell: return "population_per_cell";
        case LayerKind::vegetation_fraction: return "vegetation_fraction";
        case LayerKind::canopy_height_m: return "canopy_height_m";
        case LayerKind::region_id: return "region_id";
    }
    return "unknown";
}

bool GridHeader::contains(Point p) const {
    return p.x >= xll && p.x <= xll + width() && p.y >= yll && p.y <= yll + height();
}

void GridHeader::validate() const {
    if (ncols < 1 || nrows < 1) throw ValidationError("grid must have at least one row and column", 0);
    if (!(cellsize > 0.0) || !std::isfinite(cellsize)) throw ValidationError("CELLSIZE must be positive", 0);
    if (!std::isfinite(xll) || !std::isfinite(yll)) throw ValidationError("grid origin must be finite", 0);
}

namespace {

bool close_rel(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-6 * scale;
}

void check_value(LayerKind kind, double v, std::size_t index) {
    if (std::isnan(v)) return;
    auto fail = [&](const char* rule) {
        throw ValidationError(std::string(to_string(kind)) + " value " + format_number(v) + " at cell " +
                                  std::to_string(index) + " violates " + rule,
                              index);
    };
    if (!std::isfinite(v)) fail("finiteness");
    switch (kind) {
        case LayerKind::vegetation_fraction:
            if (v < 0.0 || v > 1.0) fail("range [0,1]");
            break;
        case LayerKind::population_per_cell:
            if (v < 0.0) fail("non-negativity");
            break;
        case LayerKind::region_id:
            if (v < 0.0 || v != std::floor(v)) fail("non-negative integer");
            break;
        case LayerKind::canopy_height_m:
            if (v < 0.0) fail("non-negativity");
            break;
        case LayerKind::elevation_m: break;
    }
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

double parse_double(const std::string& token, const std::string& key) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed value '" + token + "' for header key " + key);
    return v;
}

std::size_t parse_count(const std::string& token, const std::string& key) {
    const double v = parse_double(token, key);
    if (v < 1.0 || v != std::floor(v)) throw ParseError("header key " + key + " must be a positive integer, got '" + token + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

bool aligned(const GridHeader& a, const GridHeader& b) {
    return a.ncols == b.ncols && a.nrows == b.nrows && close_rel(a.xll, b.xll) && close_rel(a.yll, b.yll) &&
           close_rel(a.cellsize, b.cellsize) && close_rel(a.nodata, b.nodata);
}

void require_aligned(const GridHeader& a, const GridHeader& b, std::string_view what) {
    if (!aligned(a, b)) throw StructuralError("raster layers are not aligned: " + std::string(what));
}

RasterGrid::RasterGrid(GridHeader header, LayerKind kind, std::vector<double> values)
    : header_(header), kind_(kind), values_(std::move(values)) {
    header_.validate();
    if (values_.size() != header_.ncols * header_.nrows) {
        throw StructuralError("raster expects " + std::to_string(header_.ncols * header_.nrows) + " values, got " +
                              std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) check_value(kind_, values_[i], i);
}

RasterGrid::CellIndex RasterGrid::cell_of(Point p) const {
    if (!header_.contains(p)) {
        throw OutOfBoundsError("point (" + format_number(p.x) + ", " + format_number(p.y) + ") lies outside the grid");
    }
    const double fx = std::floor((p.x - header_.xll) / header_.cellsize);
    const double fy = std::floor((p.y - header_.yll) / header_.cellsize);
    const auto col = std::min(static_cast<std::size_t>(std::max(fx, 0.0)), header_.ncols - 1);
    const auto row_from_south = std::min(static_cast<std::size_t>(std::max(fy, 0.0)), header_.nrows - 1);
    return {col, header_.nrows - 1 - row_from_south};
}

Point RasterGrid::cell_center(std::size_t col, std::size_t row) const {
    return {header_.xll + (static_cast<double>(col) + 0.5) * header_.cellsize,
            header_.yll + (static_cast<double>(header_.nrows - 1 - row) + 0.5) * header_.cellsize};
}

std::optional<double> RasterGrid::sample_at(Point p) const {
    const auto c = cell_of(p);
    const double v = at(c.col, c.row);
    if (std::isnan(v)) return std::nullopt;
    return v;
}

RasterGrid parse_ascii_grid(std::istream& in, LayerKind kind) {
    GridHeader h;
    std::array<bool, 6> seen{};
    static constexpr std::array<const char*, 6> required = {"NCOLS", "NROWS", "XLLCORNER", "YLLCORNER", "CELLSIZE",
                                                            "NODATA_VALUE"};
    bool x_center = false;
    bool y_center = false;

    std::string token;
    std::string pending;  // first data token, read while probing for header keys
    while (in >> token) {
        if (!token.empty() && (std::isalpha(static_cast<unsigned char>(token[0])) || token[0] == '_')) {
            const std::string key = upper(token);
            std::string value;
            if (!(in >> value)) throw ParseError("header key " + key + " has no value");
            if (key == "NCOLS") {
                h.ncols = parse_count(value, key);
                seen[0] = true;
            } else if (key == "NROWS") {
                h.nrows = parse_count(value, key);
                seen[1] = true;
            } else if (key == "XLLCORNER" || key == "XLLCENTER") {
                h.xll = parse_double(value, key);
                x_center = key == "XLLCENTER";
                seen[2] = true;
            } else if (key == "YLLCORNER" || key == "YLLCENTER") {
                h.yll = parse_double(value, key);
                y_center = key == "YLLCENTER";
                seen[3] = true;
            } else if (key == "CELLSIZE") {
                h.cellsize = parse_double(value, key);
                if (!(h.cellsize > 0.0)) throw ParseError("header key CELLSIZE must be positive");
                seen[4] = true;
            } else if (key == "NODATA_VALUE") {
                h.nodata = parse_double(value, key);
                seen[5] = true;
            } else {
                throw ParseError("unknown header key " + key);
            }
        } else {
            pending = token;
            break;
        }
    }
    for (std::size_t i = 0; i < required.size(); ++i) {
        if (!seen[i]) throw ParseError("missing header key " + std::string(required[i]));
    }
    if (x_center) h.xll -= h.cellsize / 2.0;
    if (y_center) h.yll -= h.cellsize / 2.0;

    const std::size_t expected = h.ncols * h.nrows;
    std::vector<double> values;
    values.reserve(expected);
    auto push = [&](const std::string& tok) {
        const double v = parse_double(tok, "cell " + std::to_string(values.size()));
        values.push_back(v == h.nodata ? RasterGrid::missing : v);
    };
    if (!pending.empty()) push(pending);
    while (in >> token) push(token);
    if (values.size() != expected) {
        throw StructuralError("grid declares " + std::to_string(h.ncols) + "x" + std::to_string(h.nrows) + " = " +
                              std::to_string(expected) + " cells but provides " + std::to_string(values.size()));
    }
    return RasterGrid(h, kind, std::move(values));
}

RasterGrid load_ascii_grid(const std::filesystem::path& path, LayerKind kind) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open raster " + path.string());
    try {
        return parse_ascii_grid(in, kind);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_ascii_grid(const RasterGrid& grid, std::ostream& out) {
    const auto& h = grid.header();
    out << "NCOLS " << h.ncols << '\n'
        << "NROWS " << h.nrows << '\n'
        << "XLLCORNER " << format_number(h.xll) << '\n'
        << "YLLCORNER " << format_number(h.yll) << '\n'
        << "CELLSIZE " << format_number(h.cellsize) << '\n'
        << "NODATA_VALUE " << format_number(h.nodata) << '\n';
    for (std::size_t r = 0; r < h.nrows; ++r) {
        for (std::size_t c = 0; c < h.ncols; ++c) {
            if (c) out << ' ';
            const double v = grid.at(c, r);
            out << format_number(std::isnan(v) ? h.nodata : v);
        }
        out << '\n';
    }
}

void save_ascii_grid(const RasterGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write raster " + path.string());
    write_ascii_grid(grid, out);
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace backhaul
