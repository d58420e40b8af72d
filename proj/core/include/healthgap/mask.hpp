#pragma once

#include <span>
#include <vector>

#include "healthgap/raster.hpp"

namespace healthgap {

/// Raster restricted to {0,1} on valid cells, aligned to the analysis grid.
struct BoolMask {
    RasterGrid grid;
};

/// Inclusive radiance band.
struct NtlBand {
    double low = 0.0;
    double high = 0.0;
};

/// The three display bands used for nighttime-light categorization:
/// [0,10], [10,20], [20,30].
std::vector<NtlBand> default_ntl_bands();

/// 1 where travel time exceeds `minutes` (strict), 0 where within reach;
/// nodata propagates.
BoolMask mask_low_access(const RasterGrid& travel, double minutes);

/// 1 where population density is at least `density` (inclusive); nodata
/// propagates.
BoolMask mask_populated(const RasterGrid& pop, double density);

/// 1 where nighttime-light radiance is below `threshold` (strict); nodata
/// propagates.
BoolMask mask_low_ntl(const RasterGrid& ntl, double threshold);

/// Cellwise conjunction: 1 iff every mask is 1, nodata if any input is
/// nodata. Requires at least one mask; all masks must share a grid.
BoolMask intersect(std::span<const BoolMask> masks);

/// Category raster: value k (1-based) for the first band containing the
/// cell value, 0 when no band matches. Shared boundary values go to the
/// earlier band. Nodata propagates.
RasterGrid ntl_categorize(const RasterGrid& ntl, std::span<const NtlBand> bands);

/// 1 where the access mask is 1 and radiance lies inside the band
/// (inclusive ends); nodata if either input is nodata.
BoolMask underserved_by_band(const BoolMask& access_mask, const RasterGrid& ntl, const NtlBand& band);

} // namespace healthgap
