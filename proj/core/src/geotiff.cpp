#include "healthgap/geotiff.hpp"

#include <tiffio.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <vector>

#include "healthgap/errors.hpp"

namespace healthgap {

namespace {

// GeoTIFF and GDAL tags libtiff does not know natively.
constexpr ttag_t kTagPixelScale = 33550;
constexpr ttag_t kTagTiePoints = 33922;
constexpr ttag_t kTagTransformMatrix = 34264;
constexpr ttag_t kTagGeoKeyDirectory = 34735;
constexpr ttag_t kTagGeoAsciiParams = 34737;
constexpr ttag_t kTagGdalNodata = 42113;

// GeoKey ids and values.
constexpr uint16_t kKeyModelType = 1024;
constexpr uint16_t kKeyRasterType = 1025;
constexpr uint16_t kKeyGeographicType = 2048;
constexpr uint16_t kKeyProjectedCsType = 3072;
constexpr uint16_t kKeyProjectedCitation = 3073;
constexpr uint16_t kModelProjected = 1;
constexpr uint16_t kModelGeographic = 2;
constexpr uint16_t kRasterPixelIsArea = 1;
constexpr uint16_t kUserDefined = 32767;

const TIFFFieldInfo kGeoFieldInfo[] = {
    {kTagPixelScale, -1, -1, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1, (char*)"GeoPixelScale"},
    {kTagTiePoints, -1, -1, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1, (char*)"GeoTiePoints"},
    {kTagTransformMatrix, -1, -1, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1, (char*)"GeoTransformationMatrix"},
    {kTagGeoKeyDirectory, -1, -1, TIFF_SHORT, FIELD_CUSTOM, 1, 1, (char*)"GeoKeyDirectory"},
    {kTagGeoAsciiParams, -1, -1, TIFF_ASCII, FIELD_CUSTOM, 1, 0, (char*)"GeoASCIIParams"},
    {kTagGdalNodata, -1, -1, TIFF_ASCII, FIELD_CUSTOM, 1, 0, (char*)"GDALNoDataValue"},
};

TIFFExtendProc g_parent_extender = nullptr;

void geo_tag_extender(TIFF* tif) {
    TIFFMergeFieldInfo(tif, kGeoFieldInfo, sizeof(kGeoFieldInfo) / sizeof(kGeoFieldInfo[0]));
    if (g_parent_extender) g_parent_extender(tif);
}

void install_extender_once() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        g_parent_extender = TIFFSetTagExtender(geo_tag_extender);
        // Tag warnings ("unknown field") are noise for the formats we accept.
        TIFFSetWarningHandler(nullptr);
    });
}

struct TiffCloser {
    void operator()(TIFF* t) const {
        if (t) TIFFClose(t);
    }
};
using TiffPtr = std::unique_ptr<TIFF, TiffCloser>;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
    throw IoError(path + ": " + reason);
}

double sample_to_double(const uint8_t* p, uint16_t format, uint16_t bits) {
    switch (format) {
        case SAMPLEFORMAT_UINT:
            if (bits == 8) return *p;
            if (bits == 16) { uint16_t v; std::memcpy(&v, p, 2); return v; }
            if (bits == 32) { uint32_t v; std::memcpy(&v, p, 4); return v; }
            break;
        case SAMPLEFORMAT_INT:
            if (bits == 16) { int16_t v; std::memcpy(&v, p, 2); return v; }
            if (bits == 32) { int32_t v; std::memcpy(&v, p, 4); return v; }
            break;
        case SAMPLEFORMAT_IEEEFP:
            if (bits == 32) { float v; std::memcpy(&v, p, 4); return v; }
            if (bits == 64) { double v; std::memcpy(&v, p, 8); return v; }
            break;
        default:
            break;
    }
    return 0.0; // unreachable: format checked before decoding
}

struct GeoKeys {
    bool present = false;
    uint16_t model_type = 0;
    uint16_t geographic_type = 0;
    uint16_t projected_cs_type = 0;
    std::string projected_citation;
};

GeoKeys read_geokeys(TIFF* tif) {
    GeoKeys keys;
    uint16_t count = 0;
    uint16_t* dir = nullptr;
    if (!TIFFGetField(tif, kTagGeoKeyDirectory, &count, &dir) || count < 4) return keys;
    keys.present = true;
    const uint16_t num_keys = dir[3];
    char* ascii = nullptr;
    TIFFGetField(tif, kTagGeoAsciiParams, &ascii);
    for (uint16_t k = 0; k < num_keys; ++k) {
        const uint16_t* entry = dir + 4 + 4 * k;
        if (entry + 4 > dir + count) break;
        const uint16_t key_id = entry[0];
        const uint16_t location = entry[1];
        const uint16_t value_count = entry[2];
        const uint16_t value = entry[3];
        if (location == 0) {
            if (key_id == kKeyModelType) keys.model_type = value;
            else if (key_id == kKeyGeographicType) keys.geographic_type = value;
            else if (key_id == kKeyProjectedCsType) keys.projected_cs_type = value;
        } else if (location == kTagGeoAsciiParams && ascii && key_id == kKeyProjectedCitation) {
            std::string s(ascii);
            if (value <= s.size()) {
                std::string piece = s.substr(value, value_count);
                if (!piece.empty() && piece.back() == '|') piece.pop_back();
                keys.projected_citation = piece;
            }
        }
    }
    return keys;
}

CrsTag crs_from_keys(const GeoKeys& keys, const std::string& path) {
    if (!keys.present || keys.model_type == kModelGeographic || keys.model_type == 0)
        return CrsTag::geographic();
    if (keys.model_type == kModelProjected) {
        if (keys.projected_cs_type != 0 && keys.projected_cs_type != kUserDefined)
            return CrsTag::projected_meters("EPSG:" + std::to_string(keys.projected_cs_type));
        if (!keys.projected_citation.empty())
            return CrsTag::projected_meters(keys.projected_citation);
        return CrsTag::projected_meters("unknown");
    }
    fail(path, "unsupported GeoTIFF model type " + std::to_string(keys.model_type));
}

GeoTransform read_transform(TIFF* tif, const std::string& path) {
    GeoTransform t;
    uint16_t count = 0;
    double* d = nullptr;
    if (TIFFGetField(tif, kTagTransformMatrix, &count, &d) && count >= 16) {
        if (d[1] != 0.0 || d[4] != 0.0)
            fail(path, "rotated or skewed transformation matrix unsupported");
        if (d[0] <= 0.0 || d[5] >= 0.0)
            fail(path, "transformation matrix must be north-up with positive pixel width");
        t.pixel_width = d[0];
        t.pixel_height = -d[5];
        t.origin_x = d[3];
        t.origin_y = d[7];
        return t;
    }
    double* scale = nullptr;
    uint16_t scale_count = 0;
    double* tie = nullptr;
    uint16_t tie_count = 0;
    const bool has_scale = TIFFGetField(tif, kTagPixelScale, &scale_count, &scale) && scale_count >= 2;
    const bool has_tie = TIFFGetField(tif, kTagTiePoints, &tie_count, &tie) && tie_count >= 6;
    if (!has_scale || !has_tie)
        fail(path, "missing geotransform (no tiepoint+scale or transformation matrix)");
    if (scale[0] <= 0.0 || scale[1] <= 0.0)
        fail(path, "pixel scale must be positive");
    t.pixel_width = scale[0];
    t.pixel_height = scale[1];
    // Tiepoint maps raster point (i,j) to model (x,y).
    t.origin_x = tie[3] - tie[0] * t.pixel_width;
    t.origin_y = tie[4] + tie[1] * t.pixel_height;
    return t;
}

double read_nodata(TIFF* tif) {
    char* text = nullptr;
    if (!TIFFGetField(tif, kTagGdalNodata, &text) || !text) return kDefaultNodata;
    char* end = nullptr;
    const double v = std::strtod(text, &end);
    if (end == text) return kDefaultNodata;
    if (std::isnan(v)) return kDefaultNodata;
    return v;
}

} // namespace

RasterGrid read_geotiff(const std::string& path) {
    install_extender_once();
    TiffPtr tif(TIFFOpen(path.c_str(), "r"));
    if (!tif) fail(path, "cannot open as TIFF");
    TIFF* t = tif.get();

    uint32_t width = 0, length = 0;
    if (!TIFFGetField(t, TIFFTAG_IMAGEWIDTH, &width) || !TIFFGetField(t, TIFFTAG_IMAGELENGTH, &length) ||
        width == 0 || length == 0)
        fail(path, "missing image dimensions");

    uint16_t samples = 1;
    TIFFGetFieldDefaulted(t, TIFFTAG_SAMPLESPERPIXEL, &samples);
    if (samples != 1) fail(path, "multi-band unsupported (" + std::to_string(samples) + " bands)");

    uint16_t bits = 0;
    TIFFGetFieldDefaulted(t, TIFFTAG_BITSPERSAMPLE, &bits);
    uint16_t format = SAMPLEFORMAT_UINT;
    TIFFGetFieldDefaulted(t, TIFFTAG_SAMPLEFORMAT, &format);

    const bool supported = (format == SAMPLEFORMAT_UINT && (bits == 8 || bits == 16 || bits == 32)) ||
                           (format == SAMPLEFORMAT_INT && (bits == 16 || bits == 32)) ||
                           (format == SAMPLEFORMAT_IEEEFP && (bits == 32 || bits == 64));
    if (!supported)
        fail(path, "unsupported sample format (" + std::to_string(bits) + "-bit, format " +
                       std::to_string(format) + ")");
    const std::size_t bytes_per_sample = bits / 8;

    const GeoTransform transform = read_transform(t, path);
    const CrsTag crs = crs_from_keys(read_geokeys(t), path);
    const double nodata = read_nodata(t);

    RasterGrid grid(length, width, transform, crs, nodata, nodata);

    const auto decode_row = [&](const uint8_t* src, std::size_t row, std::size_t col0, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = sample_to_double(src + i * bytes_per_sample, format, bits);
            if (!std::isfinite(v)) v = nodata;
            grid.set(row, col0 + i, v);
        }
    };

    if (TIFFIsTiled(t)) {
        uint32_t tw = 0, th = 0;
        TIFFGetField(t, TIFFTAG_TILEWIDTH, &tw);
        TIFFGetField(t, TIFFTAG_TILELENGTH, &th);
        if (tw == 0 || th == 0) fail(path, "invalid tile dimensions");
        std::vector<uint8_t> tile(TIFFTileSize(t));
        for (uint32_t ty = 0; ty < length; ty += th) {
            for (uint32_t tx = 0; tx < width; tx += tw) {
                if (TIFFReadTile(t, tile.data(), tx, ty, 0, 0) < 0)
                    fail(path, "tile read failed at " + std::to_string(tx) + "," + std::to_string(ty));
                const uint32_t rows_here = std::min(th, length - ty);
                const uint32_t cols_here = std::min(tw, width - tx);
                for (uint32_t r = 0; r < rows_here; ++r)
                    decode_row(tile.data() + static_cast<std::size_t>(r) * tw * bytes_per_sample,
                               ty + r, tx, cols_here);
            }
        }
    } else {
        std::vector<uint8_t> row(TIFFScanlineSize(t));
        for (uint32_t r = 0; r < length; ++r) {
            if (TIFFReadScanline(t, row.data(), r) < 0)
                fail(path, "scanline read failed at row " + std::to_string(r));
            decode_row(row.data(), r, 0, width);
        }
    }
    return grid;
}

void write_geotiff(const RasterGrid& grid, const std::string& path) {
    install_extender_once();
    if (grid.rows == 0 || grid.cols == 0 || grid.values.size() != grid.rows * grid.cols)
        throw ValidationError("write_geotiff: malformed grid");

    TiffPtr tif(TIFFOpen(path.c_str(), "w"));
    if (!tif) fail(path, "cannot open for writing");
    TIFF* t = tif.get();

    TIFFSetField(t, TIFFTAG_IMAGEWIDTH, static_cast<uint32_t>(grid.cols));
    TIFFSetField(t, TIFFTAG_IMAGELENGTH, static_cast<uint32_t>(grid.rows));
    TIFFSetField(t, TIFFTAG_BITSPERSAMPLE, 32);
    TIFFSetField(t, TIFFTAG_SAMPLEFORMAT, SAMPLEFORMAT_IEEEFP);
    TIFFSetField(t, TIFFTAG_SAMPLESPERPIXEL, 1);
    TIFFSetField(t, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(t, TIFFTAG_COMPRESSION, COMPRESSION_NONE);
    TIFFSetField(t, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(t, TIFFTAG_ORIENTATION, ORIENTATION_TOPLEFT);
    // Fixed strip height keeps output bytes independent of libtiff defaults.
    const uint32_t rows_per_strip =
        std::max<uint32_t>(1, static_cast<uint32_t>(65536 / (grid.cols * sizeof(float) + 1)));
    TIFFSetField(t, TIFFTAG_ROWSPERSTRIP, rows_per_strip);

    const double scale[3] = {grid.transform.pixel_width, grid.transform.pixel_height, 0.0};
    TIFFSetField(t, kTagPixelScale, 3, scale);
    const double tie[6] = {0.0, 0.0, 0.0, grid.transform.origin_x, grid.transform.origin_y, 0.0};
    TIFFSetField(t, kTagTiePoints, 6, tie);

    std::vector<uint16_t> keys;
    std::string ascii_params;
    const auto add_key = [&keys](uint16_t id, uint16_t location, uint16_t count, uint16_t value) {
        keys.insert(keys.end(), {id, location, count, value});
    };
    if (grid.crs.kind == CrsKind::Geographic) {
        add_key(kKeyModelType, 0, 1, kModelGeographic);
        add_key(kKeyRasterType, 0, 1, kRasterPixelIsArea);
        add_key(kKeyGeographicType, 0, 1, 4326);
    } else {
        add_key(kKeyModelType, 0, 1, kModelProjected);
        add_key(kKeyRasterType, 0, 1, kRasterPixelIsArea);
        unsigned epsg = 0;
        if (grid.crs.identifier.rfind("EPSG:", 0) == 0)
            epsg = static_cast<unsigned>(std::strtoul(grid.crs.identifier.c_str() + 5, nullptr, 10));
        if (epsg > 0 && epsg < kUserDefined) {
            add_key(kKeyProjectedCsType, 0, 1, static_cast<uint16_t>(epsg));
        } else {
            ascii_params = grid.crs.identifier + "|";
            add_key(kKeyProjectedCsType, 0, 1, kUserDefined);
            add_key(kKeyProjectedCitation, kTagGeoAsciiParams, static_cast<uint16_t>(ascii_params.size()), 0);
        }
    }
    std::vector<uint16_t> dir = {1, 1, 0, static_cast<uint16_t>(keys.size() / 4)};
    dir.insert(dir.end(), keys.begin(), keys.end());
    TIFFSetField(t, kTagGeoKeyDirectory, static_cast<uint16_t>(dir.size()), dir.data());
    if (!ascii_params.empty()) TIFFSetField(t, kTagGeoAsciiParams, ascii_params.c_str());

    // Nodata is narrowed exactly like the samples so the tag matches the
    // cells after a roundtrip.
    const double narrowed_nodata = static_cast<double>(static_cast<float>(grid.nodata));
    char nodata_text[64];
    std::snprintf(nodata_text, sizeof(nodata_text), "%.17g", narrowed_nodata);
    TIFFSetField(t, kTagGdalNodata, nodata_text);

    std::vector<float> row(grid.cols);
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c)
            row[c] = static_cast<float>(grid.at(r, c));
        if (TIFFWriteScanline(t, row.data(), static_cast<uint32_t>(r), 0) < 0)
            fail(path, "scanline write failed at row " + std::to_string(r));
    }
    TIFFFlush(t);
}

} // namespace healthgap
