#pragma once

#include <span>
#include <utility>

#include "heliocot/geometry.hpp"

namespace heliocot {

// Parametric clear-sky irradiance model
//   g_c = e0 * eccentricity(day) * scale * cos(zenith)^exponent * exp(decay * zenith)
// with the coefficient signs enforced at construction. Defaults reproduce an
// equatorial clear-sky fit; all four are config-overridable.
struct ClearSkyParams {
    double transmittance_scale = 0.8277;       // > 0
    double zenith_cosine_exponent = 1.3644;    // > 0
    double elevation_decay_per_deg = -0.0013;  // <= 0
    double solar_constant_wm2 = 1361.1;        // > 0

    ClearSkyParams() = default;
    ClearSkyParams(double scale, double exponent, double decay, double e0);  // validates
};

// Earth-Sun distance factor 1 + 0.033*cos(2*pi*day/365). Fractional days are
// accepted (day-of-year plus time-of-day fraction); domain [1, 366].
double eccentricity_correction(double day_of_year);

// Horizontal clear-sky irradiance in W/m^2; zero at or below the horizon.
double clear_sky_irradiance(const SolarPosition& sun, const ClearSkyParams& params,
                            double day_of_year);

// Least-squares irradiance -> luminance map fitted on clear-sky frames.
struct LinearMap {
    double slope = 0.0;      // luminance units per W/m^2
    double intercept = 0.0;  // luminance units
    double fit_r2 = 0.0;     // [0, 1]
    long n = 0;              // >= 2
};

// OLS of luminance on irradiance over (g_c, l_norm) pairs. Needs n >= 2 and
// non-constant g_c. with_intercept=false forces the line through the origin.
LinearMap fit_linear_map(std::span<const std::pair<double, double>> pairs,
                         bool with_intercept = true);

// Clear-sky luminance baseline, clamped at zero.
double clear_sky_luminance(double g_c, const LinearMap& map);

} // namespace heliocot
