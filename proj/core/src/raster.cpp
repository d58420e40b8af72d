#include "healthgap/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "healthgap/errors.hpp"
#include "healthgap/threading.hpp"

namespace healthgap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Cell-space coordinates that land within this distance of an integer are
// snapped onto it. Absorbs the rounding of center coordinates computed
// through the affine transform; well below any real grid registration
// offset.
constexpr double kCellSnapTolerance = 1e-9;

double snap_to_integer(double u) {
    const double r = std::nearbyint(u);
    return std::abs(u - r) <= kCellSnapTolerance ? r : u;
}

} // namespace

RasterGrid::RasterGrid(std::size_t rows_, std::size_t cols_, GeoTransform transform_, CrsTag crs_,
                       double nodata_, double fill)
    : rows(rows_), cols(cols_), transform(transform_), crs(std::move(crs_)), nodata(nodata_) {
    if (rows == 0 || cols == 0)
        throw ValidationError("raster dimensions must be at least 1x1");
    if (transform.pixel_width <= 0.0 || transform.pixel_height <= 0.0)
        throw ValidationError("pixel sizes must be positive");
    values.assign(rows * cols, fill);
}

BoundingBox RasterGrid::extent() const {
    return {transform.origin_x,
            transform.origin_y - static_cast<double>(rows) * transform.pixel_height,
            transform.origin_x + static_cast<double>(cols) * transform.pixel_width,
            transform.origin_y};
}

bool RasterGrid::same_grid(const RasterGrid& other) const {
    return rows == other.rows && cols == other.cols && transform == other.transform &&
           crs == other.crs;
}

RasterGrid RasterGrid::like(double nodata_value) const {
    return RasterGrid(rows, cols, transform, crs, nodata_value, nodata_value);
}

double ns_cell_meters(const RasterGrid& grid) {
    if (grid.crs.kind == CrsKind::ProjectedMeters) return grid.transform.pixel_height;
    return grid.transform.pixel_height * kMetersPerDegree;
}

double ew_cell_meters_at(const RasterGrid& grid, double latitude_deg) {
    if (grid.crs.kind == CrsKind::ProjectedMeters) return grid.transform.pixel_width;
    return grid.transform.pixel_width * kMetersPerDegree * std::cos(latitude_deg * kPi / 180.0);
}

CellSize cell_size_meters(const RasterGrid& grid, std::size_t row) {
    if (row >= grid.rows)
        throw ValidationError("cell_size_meters: row " + std::to_string(row) + " out of range");
    if (grid.crs.kind == CrsKind::ProjectedMeters)
        return {grid.transform.pixel_width, grid.transform.pixel_height};
    const double lat = grid.transform.center_y(static_cast<std::ptrdiff_t>(row));
    return {ew_cell_meters_at(grid, lat), ns_cell_meters(grid)};
}

RasterGrid align_to(const RasterGrid& source, const RasterGrid& reference, ResampleMethod method) {
    if (source.crs.kind != reference.crs.kind)
        throw ValidationError("align_to: CRS kinds differ");

    RasterGrid out(reference.rows, reference.cols, reference.transform, reference.crs,
                   source.nodata, source.nodata);

    const auto& st = source.transform;
    const std::ptrdiff_t srows = static_cast<std::ptrdiff_t>(source.rows);
    const std::ptrdiff_t scols = static_cast<std::ptrdiff_t>(source.cols);

    parallel_chunks(reference.rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            const double y = reference.transform.center_y(static_cast<std::ptrdiff_t>(r));
            for (std::size_t c = 0; c < reference.cols; ++c) {
                const double x = reference.transform.center_x(static_cast<std::ptrdiff_t>(c));
                if (method == ResampleMethod::Nearest) {
                    const double fc = (x - st.origin_x) / st.pixel_width;
                    const double fr = (st.origin_y - y) / st.pixel_height;
                    const std::ptrdiff_t sc = static_cast<std::ptrdiff_t>(std::floor(fc));
                    const std::ptrdiff_t sr = static_cast<std::ptrdiff_t>(std::floor(fr));
                    if (sc < 0 || sc >= scols || sr < 0 || sr >= srows) continue;
                    out.set(r, c, source.at(static_cast<std::size_t>(sr), static_cast<std::size_t>(sc)));
                } else {
                    // Continuous position in cell-center space.
                    const double u = snap_to_integer((x - st.origin_x) / st.pixel_width - 0.5);
                    const double v = snap_to_integer((st.origin_y - y) / st.pixel_height - 0.5);
                    const std::ptrdiff_t c0 = static_cast<std::ptrdiff_t>(std::floor(u));
                    const std::ptrdiff_t r0s = static_cast<std::ptrdiff_t>(std::floor(v));
                    const double fu = u - static_cast<double>(c0);
                    const double fv = v - static_cast<double>(r0s);
                    const double wcol[2] = {1.0 - fu, fu};
                    const double wrow[2] = {1.0 - fv, fv};
                    double acc = 0.0;
                    bool ok = true;
                    for (int dr = 0; dr < 2 && ok; ++dr) {
                        for (int dc = 0; dc < 2 && ok; ++dc) {
                            const double w = wrow[dr] * wcol[dc];
                            if (w == 0.0) continue;
                            const std::ptrdiff_t sr = r0s + dr;
                            const std::ptrdiff_t sc = c0 + dc;
                            if (sr < 0 || sr >= srows || sc < 0 || sc >= scols) { ok = false; break; }
                            const double val = source.at(static_cast<std::size_t>(sr), static_cast<std::size_t>(sc));
                            if (source.is_nodata(val)) { ok = false; break; }
                            acc += w * val;
                        }
                    }
                    if (ok) out.set(r, c, acc);
                }
            }
        }
    });
    return out;
}

RasterGrid crop_to_extent(const RasterGrid& grid, const BoundingBox& box) {
    if (!box.valid())
        throw ValidationError("crop_to_extent: degenerate bounding box");
    const auto& t = grid.transform;
    // First/last columns and rows whose centers fall inside the box.
    const auto first_index = [](double lo, double origin, double step) {
        return static_cast<std::ptrdiff_t>(std::ceil(snap_to_integer((lo - origin) / step - 0.5)));
    };
    const auto last_index = [](double hi, double origin, double step) {
        return static_cast<std::ptrdiff_t>(std::floor(snap_to_integer((hi - origin) / step - 0.5)));
    };
    std::ptrdiff_t c0 = first_index(box.min_x, t.origin_x, t.pixel_width);
    std::ptrdiff_t c1 = last_index(box.max_x, t.origin_x, t.pixel_width);
    // Rows count downward from origin_y.
    std::ptrdiff_t r0 = first_index(-box.max_y, -t.origin_y, t.pixel_height);
    std::ptrdiff_t r1 = last_index(-box.min_y, -t.origin_y, t.pixel_height);

    c0 = std::max<std::ptrdiff_t>(c0, 0);
    r0 = std::max<std::ptrdiff_t>(r0, 0);
    c1 = std::min<std::ptrdiff_t>(c1, static_cast<std::ptrdiff_t>(grid.cols) - 1);
    r1 = std::min<std::ptrdiff_t>(r1, static_cast<std::ptrdiff_t>(grid.rows) - 1);
    if (c0 > c1 || r0 > r1)
        throw ValidationError("crop_to_extent: no cell center inside the requested extent");

    GeoTransform nt = t;
    nt.origin_x = t.origin_x + static_cast<double>(c0) * t.pixel_width;
    nt.origin_y = t.origin_y - static_cast<double>(r0) * t.pixel_height;
    RasterGrid out(static_cast<std::size_t>(r1 - r0 + 1), static_cast<std::size_t>(c1 - c0 + 1),
                   nt, grid.crs, grid.nodata, grid.nodata);
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t c = 0; c < out.cols; ++c)
            out.set(r, c, grid.at(static_cast<std::size_t>(r0) + r, static_cast<std::size_t>(c0) + c));
    return out;
}

std::optional<BoundingBox> intersect_extents(const BoundingBox& a, const BoundingBox& b) {
    BoundingBox r{std::max(a.min_x, b.min_x), std::max(a.min_y, b.min_y),
                  std::min(a.max_x, b.max_x), std::min(a.max_y, b.max_y)};
    if (!r.valid()) return std::nullopt;
    return r;
}

} // namespace healthgap
