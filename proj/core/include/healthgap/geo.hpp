#pragma once

#include <cstddef>
#include <string>
#include <utility>

namespace healthgap {

/// Spherical-earth meters per degree; used for every degree-to-meter
/// conversion in the toolkit.
inline constexpr double kMetersPerDegree = 111320.0;

/// North-up affine grid geometry. origin_x/origin_y locate the outer
/// corner of the upper-left cell; pixel_height is a magnitude and rows
/// advance southward.
struct GeoTransform {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double pixel_width = 1.0;
    double pixel_height = 1.0;

    double center_x(std::ptrdiff_t col) const { return origin_x + (static_cast<double>(col) + 0.5) * pixel_width; }
    double center_y(std::ptrdiff_t row) const { return origin_y - (static_cast<double>(row) + 0.5) * pixel_height; }

    bool operator==(const GeoTransform&) const = default;
};

enum class CrsKind { Geographic, ProjectedMeters };

/// Coordinate-system tag. Geographic grids are in degrees (WGS84);
/// projected grids are in meters under a free-form identifier.
struct CrsTag {
    CrsKind kind = CrsKind::Geographic;
    std::string identifier = "WGS84";

    static CrsTag geographic() { return {CrsKind::Geographic, "WGS84"}; }
    static CrsTag projected_meters(std::string ident) { return {CrsKind::ProjectedMeters, std::move(ident)}; }

    bool operator==(const CrsTag&) const = default;
};

/// Physical footprint of one cell, in meters.
struct CellSize {
    double ew_meters = 0.0;
    double ns_meters = 0.0;
};

/// Axis-aligned extent in grid units (degrees or meters).
struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    bool valid() const { return min_x < max_x && min_y < max_y; }
    bool operator==(const BoundingBox&) const = default;
};

/// Convenience preset covering the South Asia study window
/// (lon 60..98, lat 5..38).
inline BoundingBox south_asia_extent() { return {60.0, 5.0, 98.0, 38.0}; }

} // namespace healthgap
