#pragma once

#include "healthgap/mask.hpp"
#include "healthgap/raster.hpp"

namespace healthgap {

/// Tunable thresholds of the gap-mapping analysis. Defaults follow the
/// published constants: 30 minutes, 50 persons/km^2, radiance 20, 25 km
/// aggregation radius, 99th percentile.
struct NeedParams {
    double travel_minutes = 30.0;
    double density_threshold = 50.0;
    double ntl_threshold = 20.0;
    double radius_km = 25.0;
    double percentile = 99.0;
    bool exclude_zeros = true;

    /// Throws ValidationError when any field is outside its domain.
    void validate() const;
};

/// Per-pixel need: population density on qualifying pixels, 0 elsewhere.
struct NeedRaster {
    RasterGrid grid;
};

/// Need aggregated over the disk neighborhood of each pixel.
struct RegionalNeedRaster {
    RasterGrid grid;
};

/// Population density gated by the combined filter mask: pop where the
/// mask is 1, 0 where it is 0, nodata where either input is nodata.
NeedRaster need_per_pixel(const RasterGrid& pop, const BoolMask& combined);

/// Sums need over all cells whose center lies within radius_km of each
/// output cell's center. Offsets are measured in meters: row offsets by
/// the grid's north-south cell size, column offsets by the east-west cell
/// size at the contributing cell's row, so the kernel widens toward the
/// poles on geographic grids. Nodata cells contribute 0; output is nodata
/// only where the input is. Cost is O(rows * kernel_rows * cols) via
/// per-row prefix sums; per output cell the kernel is accumulated over
/// source rows in ascending order, each row's contribution being a prefix
/// range difference.
RegionalNeedRaster focal_sum_disk(const NeedRaster& need, double radius_km);

/// Nearest-rank percentile (value at 1-based index ceil(p/100 * n) of the
/// ascending sample). Eligible cells are valid ones, minus exact zeros
/// when exclude_zeros. Throws EmptySampleError when nothing is eligible.
double percentile_threshold(const RegionalNeedRaster& regional, double p, bool exclude_zeros);

/// 1 where the aggregated need strictly exceeds `threshold`; nodata
/// propagates.
BoolMask high_need_mask(const RegionalNeedRaster& regional, double threshold);

} // namespace healthgap
