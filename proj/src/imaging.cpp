#include "heliocot/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"

namespace heliocot {

namespace {

constexpr std::string_view kLuminanceHeader = "timestamp_utc,y_raw,l_norm,n_pixels";

// sRGB electro-optical transfer: 8-bit code value -> linear [0, 1].
double srgb_linearize(std::uint8_t code) {
    const double u = code / 255.0;
    return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4);
}

void check_meta(const ExposureMeta& meta) {
    if (!(meta.exposure_s > 0.0))
        throw MetadataError("exposure_s");
    if (!(meta.iso > 0.0))
        throw MetadataError("iso");
    if (!(meta.f_number > 0.0))
        throw MetadataError("f_number");
}

} // namespace

double relative_luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return 0.2126 * srgb_linearize(r) + 0.7152 * srgb_linearize(g) +
           0.0722 * srgb_linearize(b);
}

DiskMean circumsolar_luminance(const SkyImage& img, double sun_x_px, double sun_y_px,
                               double radius_px, bool mask_saturated) {
    if (!(radius_px > 0.0))
        throw ValidationError("circumsolar radius must be positive");
    if (sun_x_px < 0.0 || sun_x_px > img.width - 1 || sun_y_px < 0.0 || sun_y_px > img.height - 1)
        throw ValidationError("sun position outside image bounds");

    const int x_lo = std::max(0, static_cast<int>(std::ceil(sun_x_px - radius_px)));
    const int x_hi = std::min(img.width - 1, static_cast<int>(std::floor(sun_x_px + radius_px)));
    const int y_lo = std::max(0, static_cast<int>(std::ceil(sun_y_px - radius_px)));
    const int y_hi = std::min(img.height - 1, static_cast<int>(std::floor(sun_y_px + radius_px)));

    const double r2 = radius_px * radius_px;
    double sum = 0.0;
    int n = 0;
    for (int y = y_lo; y <= y_hi; ++y) {
        const double dy = y - sun_y_px;
        for (int x = x_lo; x <= x_hi; ++x) {
            const double dx = x - sun_x_px;
            if (dx * dx + dy * dy > r2)
                continue;
            const std::uint8_t r = img.channel(x, y, 0);
            const std::uint8_t g = img.channel(x, y, 1);
            const std::uint8_t b = img.channel(x, y, 2);
            if (mask_saturated && (r == 255 || g == 255 || b == 255))
                continue;
            sum += relative_luminance(r, g, b);
            ++n;
        }
    }
    if (n == 0)
        throw ValidationError("empty circumsolar region (no pixels within radius)");
    return DiskMean{sum / n, n};
}

double normalize_exposure(double y, const ExposureMeta& meta) {
    check_meta(meta);
    return y * meta.f_number * meta.f_number / (meta.exposure_s * meta.iso / 100.0);
}

std::optional<LuminanceSample> extract_sample(const SkyImage& img, const GeoLocation& site,
                                              const CameraModel& cam, double radius_px,
                                              bool mask_saturated) {
    check_meta(img.meta);
    const SolarPosition sun = solar_position(img.meta.timestamp, site);
    const SunProjection proj = project_sun(sun, cam);
    if (proj.status == SunProjection::Status::below_horizon)
        return std::nullopt;
    if (proj.status == SunProjection::Status::out_of_frame)
        throw ValidationError("sun projects outside the frame at " +
                              img.meta.timestamp.to_iso8601() +
                              " (check camera calibration)");
    const DiskMean disk = circumsolar_luminance(img, proj.x_px, proj.y_px, radius_px,
                                                mask_saturated);
    return LuminanceSample{img.meta.timestamp, disk.y_mean,
                           normalize_exposure(disk.y_mean, img.meta), disk.n_pixels};
}

std::string serialize_luminance_csv(std::span<const LuminanceSample> samples) {
    std::string out{kLuminanceHeader};
    out += '\n';
    for (const auto& s : samples) {
        out += s.timestamp.to_iso8601();
        out += ',';
        out += csv::format_number(s.y_raw);
        out += ',';
        out += csv::format_number(s.l_norm);
        out += ',';
        out += std::to_string(s.n_pixels);
        out += '\n';
    }
    return out;
}

std::vector<LuminanceSample> parse_luminance_csv(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw ParseError("empty luminance CSV");
    csv::expect_header(lines[0], kLuminanceHeader);

    std::vector<LuminanceSample> out;
    out.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        const auto fields = csv::split_fields(lines[i]);
        if (fields.size() != 4)
            throw ParseError("expected 4 fields", line_no);
        LuminanceSample s;
        try {
            s.timestamp = UtcInstant::parse_iso8601(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        s.y_raw = csv::parse_number(fields[1], line_no);
        s.l_norm = csv::parse_number(fields[2], line_no);
        s.n_pixels = static_cast<int>(csv::parse_integer(fields[3], line_no));
        out.push_back(s);
    }
    return out;
}

} // namespace heliocot
