#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heliocot/geometry.hpp"
#include "heliocot/time.hpp"

namespace heliocot {

struct ExposureMeta {
    UtcInstant timestamp;
    double exposure_s = 0.0;  // > 0
    double iso = 0.0;         // > 0
    double f_number = 0.0;    // > 0
};

// Decoded 8-bit RGB sky frame with its exposure metadata.
struct SkyImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // interleaved, row-major, 3 bytes/pixel
    ExposureMeta meta;

    std::uint8_t channel(int x, int y, int c) const {
        return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + static_cast<std::size_t>(c)];
    }
};

// BT.709 relative luminance of one pixel, channels linearized from sRGB.
double relative_luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b);

struct DiskMean {
    double y_mean = 0.0;
    int n_pixels = 0;
};

// Mean relative luminance over pixels whose center lies within radius_px of
// the sun position, clipped to the frame. mask_saturated drops pixels with
// any channel at 255. Throws when no pixel qualifies.
DiskMean circumsolar_luminance(const SkyImage& img, double sun_x_px, double sun_y_px,
                               double radius_px, bool mask_saturated = false);

// Reflected-light exposure normalization: y * N^2 / (t * S/100). Makes frames
// taken under different auto-exposure settings comparable.
double normalize_exposure(double y, const ExposureMeta& meta);

struct LuminanceSample {
    UtcInstant timestamp;
    double y_raw = 0.0;   // [0, 1]
    double l_norm = 0.0;  // >= 0, arbitrary linear units
    int n_pixels = 0;     // > 0
};

// Full per-frame extraction: solar position at the frame timestamp, fisheye
// projection, circumsolar mean, exposure normalization. Returns nullopt when
// the sun is below the horizon (night frames leave the series).
std::optional<LuminanceSample> extract_sample(const SkyImage& img, const GeoLocation& site,
                                              const CameraModel& cam, double radius_px,
                                              bool mask_saturated = false);

// luminance.csv: header `timestamp_utc,y_raw,l_norm,n_pixels`.
std::string serialize_luminance_csv(std::span<const LuminanceSample> samples);
std::vector<LuminanceSample> parse_luminance_csv(const std::string& text);

} // namespace heliocot
