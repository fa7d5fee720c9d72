#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace backhaul {

enum class LayerKind { elevation_m, population_per_cell, vegetation_fraction, canopy_height_m, region_id };

std::string_view to_string(LayerKind kind);

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance_m(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Spatial frame of an ESRI ASCII grid. (xll, yll) is the lower-left corner of
// the lower-left cell; all coordinates are projected planar metres.
struct GridHeader {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double xll = 0.0;
    double yll = 0.0;
    double cellsize = 1.0;
    double nodata = -9999.0;

    double width() const { return static_cast<double>(ncols) * cellsize; }
    double height() const { return static_cast<double>(nrows) * cellsize; }
    double cell_area_km2() const { return cellsize * cellsize / 1.0e6; }
    bool contains(Point p) const;

    // Throws ValidationError when the header cannot describe a grid.
    void validate() const;
};

// All six fields equal within 1e-6 relative tolerance.
bool aligned(const GridHeader& a, const GridHeader& b);

// Throws StructuralError naming `what` when the two headers are not aligned.
void require_aligned(const GridHeader& a, const GridHeader& b, std::string_view what);

// Immutable, row-major raster. Row 0 is the northern-most row, matching the
// on-disk order of ESRI ASCII grids. Missing cells are stored as NaN.
class RasterGrid {
public:
    static constexpr double missing = std::numeric_limits<double>::quiet_NaN();

    // Validates shape and per-kind value ranges; `values` uses NaN for nodata.
    RasterGrid(GridHeader header, LayerKind kind, std::vector<double> values);

    const GridHeader& header() const { return header_; }
    LayerKind kind() const { return kind_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t ncols() const { return header_.ncols; }
    std::size_t nrows() const { return header_.nrows; }
    double cellsize() const { return header_.cellsize; }

    double at(std::size_t col, std::size_t row) const { return values_[row * header_.ncols + col]; }
    bool is_missing(std::size_t col, std::size_t row) const { return std::isnan(at(col, row)); }

    struct CellIndex {
        std::size_t col;
        std::size_t row;
    };

    // Cell containing (x, y). The bounding box is closed: points on the
    // east/north edge map to the last column/row. Throws OutOfBoundsError.
    CellIndex cell_of(Point p) const;
    Point cell_center(std::size_t col, std::size_t row) const;

    // Nearest-cell value at (x, y); std::nullopt when the cell is nodata.
    std::optional<double> sample_at(Point p) const;

private:
    GridHeader header_;
    LayerKind kind_;
    std::vector<double> values_;
};

inline std::optional<double> sample_at(const RasterGrid& grid, Point p) { return grid.sample_at(p); }

RasterGrid parse_ascii_grid(std::istream& in, LayerKind kind);
RasterGrid load_ascii_grid(const std::filesystem::path& path, LayerKind kind);

// Values are written in shortest round-trip form so a reload is exact.
void write_ascii_grid(const RasterGrid& grid, std::ostream& out);
void save_ascii_grid(const RasterGrid& grid, const std::filesystem::path& path);

}  // namespace backhaul
