#pragma once

#include <string>

#include "healthgap/raster.hpp"

namespace healthgap {

/// Reads a single-band GeoTIFF. Accepts uint8/16/32, int16/32, float32/64
/// samples (integers widened losslessly to doubles), striped or tiled
/// layout, either byte order. The geotransform comes from the
/// tiepoint+scale pair or an axis-aligned transformation matrix; the CRS
/// from the GeoTIFF key directory (missing keys default to geographic
/// WGS84); nodata from the GDAL ASCII tag, defaulting to -9999. Non-finite
/// samples are mapped to nodata. Throws IoError with the path and reason
/// on unreadable, multi-band, rotated, or unsupported files.
RasterGrid read_geotiff(const std::string& path);

/// Writes a single-band float32 GeoTIFF (little-endian, uncompressed,
/// striped) carrying the grid's transform, CRS keys, and nodata tag. The
/// nodata tag is written after float32 narrowing so a written file reads
/// back with nodata equal to its own nodata cells. Throws IoError on
/// failure.
void write_geotiff(const RasterGrid& grid, const std::string& path);

} // namespace healthgap
