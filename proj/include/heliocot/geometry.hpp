#pragma once

#include "heliocot/time.hpp"

namespace heliocot {

struct GeoLocation {
    double latitude_deg = 0.0;   // degrees north, [-90, 90]
    double longitude_deg = 0.0;  // degrees east, [-180, 180]
    double altitude_m = 0.0;     // informational only

    GeoLocation() = default;
    GeoLocation(double lat, double lon, double alt = 0.0);  // validates ranges
};

// Sun direction in local horizontal coordinates. Elevation is derived so the
// zenith + elevation = 90 identity holds exactly.
struct SolarPosition {
    double zenith_deg = 0.0;   // [0, 180]
    double azimuth_deg = 0.0;  // [0, 360), clockwise from north

    double elevation_deg() const { return 90.0 - zenith_deg; }
};

// Equidistant fisheye camera, zenith-pointing. radius_90deg_px is the pixel
// radius of the horizon circle; azimuth_offset_deg rotates camera-to-north,
// and mirrored covers horizontally flipped mountings.
struct CameraModel {
    int image_width_px = 0;
    int image_height_px = 0;
    double center_x_px = 0.0;
    double center_y_px = 0.0;
    double radius_90deg_px = 0.0;
    double azimuth_offset_deg = 0.0;
    bool mirrored = false;

    CameraModel() = default;
    CameraModel(int width, int height, double cx, double cy, double r90,
                double azimuth_offset = 0.0, bool mirror = false);  // validates
};

// Sun position for a site and instant, unrefracted, via the calculation chain
// of the NOAA solar calculator. Valid for years 1950-2050 (throws outside).
SolarPosition solar_position(const UtcInstant& t, const GeoLocation& loc);

struct SunProjection {
    enum class Status { visible, below_horizon, out_of_frame };
    Status status = Status::below_horizon;
    double x_px = 0.0;
    double y_px = 0.0;

    bool visible() const { return status == Status::visible; }
};

// Projects the sun into pixel coordinates (equidistant: radius proportional
// to zenith angle). below_horizon when elevation <= 0; out_of_frame when the
// projected point falls outside the image.
SunProjection project_sun(const SolarPosition& sun, const CameraModel& cam);

} // namespace heliocot
