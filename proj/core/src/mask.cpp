#include "healthgap/mask.hpp"

#include <string>

#include "healthgap/errors.hpp"
#include "healthgap/threading.hpp"

namespace healthgap {

namespace {

// Mask rasters always carry the default sentinel; it cannot collide with
// the {0,1} payload.
template <typename Fn>
BoolMask cellwise_mask(const RasterGrid& input, Fn&& predicate) {
    RasterGrid out(input.rows, input.cols, input.transform, input.crs, kDefaultNodata);
    parallel_chunks(input.rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = 0; c < input.cols; ++c) {
                const double v = input.at(r, c);
                if (input.is_nodata(v))
                    out.set(r, c, kDefaultNodata);
                else
                    out.set(r, c, predicate(v) ? 1.0 : 0.0);
            }
        }
    });
    return {std::move(out)};
}

} // namespace

std::vector<NtlBand> default_ntl_bands() {
    return {{0.0, 10.0}, {10.0, 20.0}, {20.0, 30.0}};
}

BoolMask mask_low_access(const RasterGrid& travel, double minutes) {
    if (minutes <= 0.0) throw ValidationError("mask_low_access: minutes must be positive");
    return cellwise_mask(travel, [minutes](double v) { return v > minutes; });
}

BoolMask mask_populated(const RasterGrid& pop, double density) {
    if (density < 0.0) throw ValidationError("mask_populated: density threshold must be >= 0");
    return cellwise_mask(pop, [density](double v) { return v >= density; });
}

BoolMask mask_low_ntl(const RasterGrid& ntl, double threshold) {
    if (threshold < 0.0) throw ValidationError("mask_low_ntl: threshold must be >= 0");
    return cellwise_mask(ntl, [threshold](double v) { return v < threshold; });
}

BoolMask intersect(std::span<const BoolMask> masks) {
    if (masks.empty()) throw ValidationError("intersect: need at least one mask");
    const RasterGrid& first = masks.front().grid;
    for (const BoolMask& m : masks)
        if (!m.grid.same_grid(first)) throw ValidationError("intersect: masks are on different grids");

    RasterGrid out(first.rows, first.cols, first.transform, first.crs, kDefaultNodata);
    parallel_chunks(first.rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = 0; c < first.cols; ++c) {
                bool any_nodata = false;
                bool all_one = true;
                for (const BoolMask& m : masks) {
                    const double v = m.grid.at(r, c);
                    if (m.grid.is_nodata(v)) { any_nodata = true; break; }
                    if (v != 1.0) all_one = false;
                }
                out.set(r, c, any_nodata ? kDefaultNodata : (all_one ? 1.0 : 0.0));
            }
        }
    });
    return {std::move(out)};
}

RasterGrid ntl_categorize(const RasterGrid& ntl, std::span<const NtlBand> bands) {
    if (bands.empty()) throw ValidationError("ntl_categorize: need at least one band");
    for (const NtlBand& b : bands)
        if (!(b.low >= 0.0 && b.low < b.high))
            throw ValidationError("ntl_categorize: bands require 0 <= low < high");

    RasterGrid out(ntl.rows, ntl.cols, ntl.transform, ntl.crs, kDefaultNodata);
    parallel_chunks(ntl.rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = 0; c < ntl.cols; ++c) {
                const double v = ntl.at(r, c);
                if (ntl.is_nodata(v)) { out.set(r, c, kDefaultNodata); continue; }
                double category = 0.0;
                for (std::size_t k = 0; k < bands.size(); ++k) {
                    if (v >= bands[k].low && v <= bands[k].high) {
                        category = static_cast<double>(k + 1);
                        break;
                    }
                }
                out.set(r, c, category);
            }
        }
    });
    return out;
}

BoolMask underserved_by_band(const BoolMask& access_mask, const RasterGrid& ntl, const NtlBand& band) {
    if (!access_mask.grid.same_grid(ntl))
        throw ValidationError("underserved_by_band: mask and radiance grids differ");

    RasterGrid out(ntl.rows, ntl.cols, ntl.transform, ntl.crs, kDefaultNodata);
    parallel_chunks(ntl.rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = 0; c < ntl.cols; ++c) {
                const double m = access_mask.grid.at(r, c);
                const double v = ntl.at(r, c);
                if (access_mask.grid.is_nodata(m) || ntl.is_nodata(v)) {
                    out.set(r, c, kDefaultNodata);
                    continue;
                }
                out.set(r, c, (m == 1.0 && v >= band.low && v <= band.high) ? 1.0 : 0.0);
            }
        }
    });
    return {std::move(out)};
}

} // namespace healthgap
