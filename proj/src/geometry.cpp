#include "heliocot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heliocot/errors.hpp"

namespace heliocot {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double wrap_degrees(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    return w;
}

} // namespace

GeoLocation::GeoLocation(double lat, double lon, double alt)
    : latitude_deg(lat), longitude_deg(lon), altitude_m(alt) {
    if (!(lat >= -90.0 && lat <= 90.0))
        throw ValidationError("latitude out of [-90, 90]: " + std::to_string(lat));
    if (!(lon >= -180.0 && lon <= 180.0))
        throw ValidationError("longitude out of [-180, 180]: " + std::to_string(lon));
}

CameraModel::CameraModel(int width, int height, double cx, double cy, double r90,
                         double azimuth_offset, bool mirror)
    : image_width_px(width),
      image_height_px(height),
      center_x_px(cx),
      center_y_px(cy),
      radius_90deg_px(r90),
      azimuth_offset_deg(azimuth_offset),
      mirrored(mirror) {
    if (width <= 0 || height <= 0)
        throw ValidationError("camera image dimensions must be positive");
    if (!(r90 > 0.0))
        throw ValidationError("radius_90deg_px must be positive");
    if (cx < 0.0 || cx > width - 1 || cy < 0.0 || cy > height - 1)
        throw ValidationError("principal point outside image bounds");
}

SolarPosition solar_position(const UtcInstant& t, const GeoLocation& loc) {
    const int year = t.year();
    if (year < 1950 || year > 2050)
        throw ValidationError("year " + std::to_string(year) +
                              " outside solar algorithm validity window 1950-2050");

    // Julian centuries since J2000.
    const double jd = t.epoch_seconds() / 86400.0 + 2440587.5;
    const double T = (jd - 2451545.0) / 36525.0;

    const double mean_long =
        std::fmod(280.46646 + T * (36000.76983 + T * 0.0003032), 360.0);
    const double mean_anom = 357.52911 + T * (35999.05029 - 0.0001537 * T);
    const double eccentricity = 0.016708634 - T * (0.000042037 + 0.0000001267 * T);
    const double anom_rad = mean_anom * kDegToRad;
    const double eq_center =
        std::sin(anom_rad) * (1.914602 - T * (0.004817 + 0.000014 * T)) +
        std::sin(2.0 * anom_rad) * (0.019993 - 0.000101 * T) +
        std::sin(3.0 * anom_rad) * 0.000289;
    const double true_long = mean_long + eq_center;
    const double omega = 125.04 - 1934.136 * T;
    const double apparent_long =
        true_long - 0.00569 - 0.00478 * std::sin(omega * kDegToRad);

    const double mean_obliquity =
        23.0 + (26.0 + (21.448 - T * (46.815 + T * (0.00059 - T * 0.001813))) / 60.0) / 60.0;
    const double obliquity = mean_obliquity + 0.00256 * std::cos(omega * kDegToRad);

    const double obliquity_rad = obliquity * kDegToRad;
    const double apparent_rad = apparent_long * kDegToRad;
    const double declination =
        std::asin(std::sin(obliquity_rad) * std::sin(apparent_rad));

    // Equation of time, minutes.
    const double y = std::tan(obliquity_rad / 2.0) * std::tan(obliquity_rad / 2.0);
    const double mean_long_rad = mean_long * kDegToRad;
    const double eq_time =
        4.0 * kRadToDeg *
        (y * std::sin(2.0 * mean_long_rad) - 2.0 * eccentricity * std::sin(anom_rad) +
         4.0 * eccentricity * y * std::sin(anom_rad) * std::cos(2.0 * mean_long_rad) -
         0.5 * y * y * std::sin(4.0 * mean_long_rad) -
         1.25 * eccentricity * eccentricity * std::sin(2.0 * anom_rad));

    const double true_solar_min = t.hours_of_day() * 60.0 + eq_time + 4.0 * loc.longitude_deg;
    const double hour_angle_rad = (true_solar_min / 4.0 - 180.0) * kDegToRad;

    const double lat_rad = loc.latitude_deg * kDegToRad;
    const double cos_zenith = std::sin(lat_rad) * std::sin(declination) +
                              std::cos(lat_rad) * std::cos(declination) * std::cos(hour_angle_rad);
    const double zenith = std::acos(std::clamp(cos_zenith, -1.0, 1.0)) * kRadToDeg;

    const double azimuth =
        wrap_degrees(std::atan2(std::sin(hour_angle_rad),
                                std::cos(hour_angle_rad) * std::sin(lat_rad) -
                                    std::tan(declination) * std::cos(lat_rad)) *
                         kRadToDeg +
                     180.0);

    return SolarPosition{zenith, azimuth};
}

SunProjection project_sun(const SolarPosition& sun, const CameraModel& cam) {
    if (sun.elevation_deg() <= 0.0)
        return SunProjection{SunProjection::Status::below_horizon, 0.0, 0.0};

    const double radius = sun.zenith_deg / 90.0 * cam.radius_90deg_px;
    const double bearing_rad = (sun.azimuth_deg + cam.azimuth_offset_deg) * kDegToRad;
    const double dx = radius * std::sin(bearing_rad) * (cam.mirrored ? -1.0 : 1.0);
    const double x = cam.center_x_px + dx;
    const double y = cam.center_y_px - radius * std::cos(bearing_rad);

    if (x < 0.0 || x > cam.image_width_px - 1 || y < 0.0 || y > cam.image_height_px - 1)
        return SunProjection{SunProjection::Status::out_of_frame, x, y};
    return SunProjection{SunProjection::Status::visible, x, y};
}

} // namespace heliocot
