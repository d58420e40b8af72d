#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "healthgap/geo.hpp"

namespace healthgap {

inline constexpr double kDefaultNodata = -9999.0;

enum class ResampleMethod { Nearest, Bilinear };

/// One band of georeferenced 64-bit values, row-major. Grids are treated
/// as immutable once filled; every operation returns a new grid, so they
/// are safe to share across threads.
struct RasterGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    GeoTransform transform;
    CrsTag crs;
    double nodata = kDefaultNodata;
    std::vector<double> values;

    RasterGrid() = default;
    RasterGrid(std::size_t rows, std::size_t cols, GeoTransform transform, CrsTag crs,
               double nodata = kDefaultNodata, double fill = 0.0);

    std::size_t cell_count() const { return rows * cols; }
    std::size_t index(std::size_t row, std::size_t col) const { return row * cols + col; }

    double at(std::size_t row, std::size_t col) const { return values[index(row, col)]; }
    void set(std::size_t row, std::size_t col, double v) { values[index(row, col)] = v; }

    bool is_nodata(double v) const {
        return v == nodata || (std::isnan(v) && std::isnan(nodata));
    }
    bool valid_at(std::size_t row, std::size_t col) const { return !is_nodata(at(row, col)); }

    /// Outer extent (cell edges, not centers).
    BoundingBox extent() const;

    /// Same shape, transform and CRS; cell-by-cell combination with
    /// another grid is meaningful only when this holds.
    bool same_grid(const RasterGrid& other) const;

    /// A grid with identical geometry, nodata-filled values.
    RasterGrid like(double nodata_value) const;
};

/// Physical size of cells in row `row` in meters. Projected grids pass
/// pixel sizes through; geographic grids convert degrees with the
/// spherical constant and scale east-west by cos(latitude of the row
/// center). Throws ValidationError when row is out of range.
CellSize cell_size_meters(const RasterGrid& grid, std::size_t row);

/// North-south cell size in meters; identical for every row of a grid.
double ns_cell_meters(const RasterGrid& grid);

/// East-west meters of one cell at a given latitude (degrees) for a
/// geographic grid, or pixel_width for a projected one.
double ew_cell_meters_at(const RasterGrid& grid, double latitude_deg);

/// Resamples `source` onto the geometry of `reference`. Nearest picks the
/// source cell containing each output cell center; Bilinear blends the
/// four surrounding source cell centers (neighbors with zero weight are
/// ignored, so a grid aligns onto itself exactly). Output cells whose
/// sample falls outside the source, or whose contributing inputs are
/// nodata, become nodata. Throws ValidationError on CRS-kind mismatch.
RasterGrid align_to(const RasterGrid& source, const RasterGrid& reference, ResampleMethod method);

/// Subgrid of cells whose centers fall inside `box` (edges inclusive).
/// Throws ValidationError when no cell qualifies.
RasterGrid crop_to_extent(const RasterGrid& grid, const BoundingBox& box);

/// Intersection of grid extents; std::nullopt when disjoint.
std::optional<BoundingBox> intersect_extents(const BoundingBox& a, const BoundingBox& b);

} // namespace healthgap
