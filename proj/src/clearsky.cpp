#include "heliocot/clearsky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heliocot/errors.hpp"

namespace heliocot {

ClearSkyParams::ClearSkyParams(double scale, double exponent, double decay, double e0)
    : transmittance_scale(scale),
      zenith_cosine_exponent(exponent),
      elevation_decay_per_deg(decay),
      solar_constant_wm2(e0) {
    if (!(scale > 0.0))
        throw ValidationError("clear-sky transmittance scale must be > 0");
    if (!(exponent > 0.0))
        throw ValidationError("clear-sky cosine exponent must be > 0");
    if (!(decay <= 0.0))
        throw ValidationError("clear-sky elevation decay must be <= 0");
    if (!(e0 > 0.0))
        throw ValidationError("solar constant must be > 0");
}

double eccentricity_correction(double day_of_year) {
    if (!(day_of_year >= 1.0 && day_of_year <= 366.0))
        throw ValidationError("day of year out of [1, 366]: " + std::to_string(day_of_year));
    return 1.0 + 0.033 * std::cos(2.0 * std::numbers::pi * day_of_year / 365.0);
}

double clear_sky_irradiance(const SolarPosition& sun, const ClearSkyParams& params,
                            double day_of_year) {
    if (sun.elevation_deg() <= 0.0)
        return 0.0;
    const double zenith_rad = sun.zenith_deg * std::numbers::pi / 180.0;
    const double cos_zenith = std::cos(zenith_rad);
    if (cos_zenith <= 0.0)
        return 0.0;
    return params.solar_constant_wm2 * eccentricity_correction(day_of_year) *
           params.transmittance_scale *
           std::pow(cos_zenith, params.zenith_cosine_exponent) *
           std::exp(params.elevation_decay_per_deg * (90.0 - sun.elevation_deg()));
}

LinearMap fit_linear_map(std::span<const std::pair<double, double>> pairs,
                         bool with_intercept) {
    const long n = static_cast<long>(pairs.size());
    if (n < 2)
        throw ValidationError("linear map fit needs at least 2 pairs, got " + std::to_string(n));

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    LinearMap map;
    map.n = n;
    double ss_tot = 0.0;
    if (with_intercept) {
        double sxx = 0.0, sxy = 0.0;
        for (const auto& [x, y] : pairs) {
            sxx += (x - mean_x) * (x - mean_x);
            sxy += (x - mean_x) * (y - mean_y);
            ss_tot += (y - mean_y) * (y - mean_y);
        }
        if (sxx == 0.0)
            throw ValidationError("singular fit: all irradiance values identical");
        map.slope = sxy / sxx;
        map.intercept = mean_y - map.slope * mean_x;
    } else {
        double sxx = 0.0, sxy = 0.0;
        for (const auto& [x, y] : pairs) {
            sxx += x * x;
            sxy += x * y;
            ss_tot += (y - mean_y) * (y - mean_y);
        }
        if (sxx == 0.0)
            throw ValidationError("singular fit: all irradiance values zero");
        map.slope = sxy / sxx;
        map.intercept = 0.0;
    }

    double ss_res = 0.0;
    for (const auto& [x, y] : pairs) {
        const double r = y - (map.slope * x + map.intercept);
        ss_res += r * r;
    }
    map.fit_r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    return map;
}

double clear_sky_luminance(double g_c, const LinearMap& map) {
    return std::max(0.0, map.slope * g_c + map.intercept);
}

} // namespace heliocot
