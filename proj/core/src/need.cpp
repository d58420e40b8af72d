#include "healthgap/need.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "healthgap/errors.hpp"
#include "healthgap/threading.hpp"

namespace healthgap {

void NeedParams::validate() const {
    if (!(travel_minutes > 0.0)) throw ValidationError("params: travel_minutes must be > 0");
    if (!(density_threshold >= 0.0)) throw ValidationError("params: density_threshold must be >= 0");
    if (!(ntl_threshold >= 0.0)) throw ValidationError("params: ntl_threshold must be >= 0");
    if (!(radius_km > 0.0)) throw ValidationError("params: radius_km must be > 0");
    if (!(percentile > 0.0 && percentile <= 100.0))
        throw ValidationError("params: percentile must be in (0, 100]");
}

NeedRaster need_per_pixel(const RasterGrid& pop, const BoolMask& combined) {
    if (!pop.same_grid(combined.grid))
        throw ValidationError("need_per_pixel: population and mask grids differ");

    RasterGrid out(pop.rows, pop.cols, pop.transform, pop.crs, kDefaultNodata);
    parallel_chunks(pop.rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = 0; c < pop.cols; ++c) {
                const double p = pop.at(r, c);
                const double m = combined.grid.at(r, c);
                if (pop.is_nodata(p) || combined.grid.is_nodata(m))
                    out.set(r, c, kDefaultNodata);
                else
                    out.set(r, c, m == 1.0 ? p : 0.0);
            }
        }
    });
    return {std::move(out)};
}

namespace {

// Widest |column offset| whose center stays inside the disk, for a given
// row offset. Found with the exact membership predicate
//   (dr*ns)^2 + (dc*ew)^2 <= radius_m^2
// so boundary decisions match a direct per-cell evaluation bit for bit.
std::size_t disk_half_width(double dy_meters, double ew_meters, double radius_m, std::size_t max_cols) {
    const auto inside = [&](std::size_t dc) {
        const double dx = static_cast<double>(dc) * ew_meters;
        return dy_meters * dy_meters + dx * dx <= radius_m * radius_m;
    };
    if (!inside(0)) return static_cast<std::size_t>(-1); // row entirely outside
    const double rem = radius_m * radius_m - dy_meters * dy_meters;
    std::size_t w = static_cast<std::size_t>(
        std::min(static_cast<double>(max_cols), std::floor(std::sqrt(std::max(0.0, rem)) / ew_meters)));
    while (w > 0 && !inside(w)) --w;
    while (w < max_cols && inside(w + 1)) ++w;
    return w;
}

} // namespace

RegionalNeedRaster focal_sum_disk(const NeedRaster& need, double radius_km) {
    if (!(radius_km > 0.0)) throw ValidationError("focal_sum_disk: radius_km must be > 0");
    const RasterGrid& in = need.grid;
    const double radius_m = radius_km * 1000.0;
    const double ns = ns_cell_meters(in);
    const std::ptrdiff_t nrows = static_cast<std::ptrdiff_t>(in.rows);
    const std::ptrdiff_t ncols = static_cast<std::ptrdiff_t>(in.cols);

    // Per-row east-west cell sizes and the vertical kernel reach.
    std::vector<double> ew(in.rows);
    for (std::size_t r = 0; r < in.rows; ++r) ew[r] = cell_size_meters(in, r).ew_meters;
    const std::ptrdiff_t reach = static_cast<std::ptrdiff_t>(std::floor(radius_m / ns));

    RasterGrid out(in.rows, in.cols, in.transform, in.crs, kDefaultNodata);

    // Work in output-row tiles; each tile builds prefix sums for the source
    // rows its kernels touch. A source row's prefix is a pure function of
    // that row, so tile boundaries and thread count cannot change results.
    constexpr std::size_t kTileRows = 64;
    const std::size_t tile_count = (in.rows + kTileRows - 1) / kTileRows;

    parallel_chunks(tile_count, [&](std::size_t t0, std::size_t t1) {
        std::vector<double> prefix; // (rows in window) x (cols + 1)
        for (std::size_t tile = t0; tile < t1; ++tile) {
            const std::ptrdiff_t out_r0 = static_cast<std::ptrdiff_t>(tile * kTileRows);
            const std::ptrdiff_t out_r1 = std::min<std::ptrdiff_t>(out_r0 + kTileRows, nrows);
            const std::ptrdiff_t src_r0 = std::max<std::ptrdiff_t>(0, out_r0 - reach);
            const std::ptrdiff_t src_r1 = std::min<std::ptrdiff_t>(nrows, out_r1 + reach + 1);
            const std::size_t window = static_cast<std::size_t>(src_r1 - src_r0);
            const std::size_t stride = in.cols + 1;

            prefix.assign(window * stride, 0.0);
            for (std::size_t wr = 0; wr < window; ++wr) {
                const std::size_t sr = static_cast<std::size_t>(src_r0) + wr;
                double acc = 0.0;
                double* row = prefix.data() + wr * stride;
                row[0] = 0.0;
                for (std::size_t c = 0; c < in.cols; ++c) {
                    const double v = in.at(sr, c);
                    if (!in.is_nodata(v)) acc += v;
                    row[c + 1] = acc;
                }
            }

            for (std::ptrdiff_t r = out_r0; r < out_r1; ++r) {
                for (std::ptrdiff_t c = 0; c < ncols; ++c) {
                    if (!in.valid_at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)))
                        continue; // stays nodata
                    double sum = 0.0;
                    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(src_r0, r - reach);
                    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(src_r1 - 1, r + reach);
                    for (std::ptrdiff_t sr = lo; sr <= hi; ++sr) {
                        const double dy = static_cast<double>(sr - r) * ns;
                        const std::size_t w = disk_half_width(dy, ew[static_cast<std::size_t>(sr)],
                                                              radius_m, in.cols);
                        if (w == static_cast<std::size_t>(-1)) continue;
                        const std::ptrdiff_t c0 = std::max<std::ptrdiff_t>(0, c - static_cast<std::ptrdiff_t>(w));
                        const std::ptrdiff_t c1 = std::min<std::ptrdiff_t>(ncols - 1, c + static_cast<std::ptrdiff_t>(w));
                        const double* row = prefix.data() + static_cast<std::size_t>(sr - src_r0) * stride;
                        sum += row[c1 + 1] - row[c0];
                    }
                    out.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), sum);
                }
            }
        }
    });
    return {std::move(out)};
}

double percentile_threshold(const RegionalNeedRaster& regional, double p, bool exclude_zeros) {
    if (!(p > 0.0 && p <= 100.0))
        throw ValidationError("percentile_threshold: p must be in (0, 100]");
    const RasterGrid& g = regional.grid;
    std::vector<double> eligible;
    eligible.reserve(g.values.size());
    for (const double v : g.values) {
        if (g.is_nodata(v)) continue;
        if (exclude_zeros && v == 0.0) continue;
        eligible.push_back(v);
    }
    if (eligible.empty())
        throw EmptySampleError("percentile_threshold: no eligible cells");
    std::sort(eligible.begin(), eligible.end());
    const long double q = static_cast<long double>(p) * static_cast<long double>(eligible.size()) / 100.0L;
    // Guard against ulp-level overshoot when p*n/100 is an exact integer.
    std::size_t k = static_cast<std::size_t>(std::ceil(static_cast<double>(q - 1e-9L)));
    k = std::clamp<std::size_t>(k, 1, eligible.size());
    return eligible[k - 1];
}

BoolMask high_need_mask(const RegionalNeedRaster& regional, double threshold) {
    const RasterGrid& g = regional.grid;
    RasterGrid out(g.rows, g.cols, g.transform, g.crs, kDefaultNodata);
    parallel_chunks(g.rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = 0; c < g.cols; ++c) {
                const double v = g.at(r, c);
                if (g.is_nodata(v))
                    out.set(r, c, kDefaultNodata);
                else
                    out.set(r, c, v > threshold ? 1.0 : 0.0);
            }
        }
    });
    return {std::move(out)};
}

} // namespace healthgap
