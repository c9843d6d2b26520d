#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "heliocot/clearsky.hpp"
#include "heliocot/errors.hpp"

using namespace heliocot;

TEST_CASE("ClearSkyParams enforces coefficient signs") {
    CHECK_THROWS_AS(ClearSkyParams(0.0, 1.3, -0.001, 1361.0), ValidationError);
    CHECK_THROWS_AS(ClearSkyParams(0.8, -1.0, -0.001, 1361.0), ValidationError);
    CHECK_THROWS_AS(ClearSkyParams(0.8, 1.3, 0.001, 1361.0), ValidationError);
    CHECK_THROWS_AS(ClearSkyParams(0.8, 1.3, -0.001, 0.0), ValidationError);
    CHECK_NOTHROW(ClearSkyParams(0.8, 1.3, 0.0, 1361.0));
}

TEST_CASE("eccentricity_correction at known days") {
    // 1 + 0.033*cos(2*pi*1/365), evaluated independently
    CHECK(eccentricity_correction(1) == doctest::Approx(1.0329951106939008).epsilon(1e-14));
    // cosine zero crossing near day 91.25: exactly 1
    CHECK(eccentricity_correction(91.25) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eccentricity_correction(94) == doctest::Approx(0.99843839418535973).epsilon(1e-14));
    for (int day = 1; day <= 366; ++day) {
        const double e = eccentricity_correction(day);
        CHECK(e >= 0.967);
        CHECK(e <= 1.033);
    }
    CHECK_THROWS_AS(eccentricity_correction(0), ValidationError);
    CHECK_THROWS_AS(eccentricity_correction(367), ValidationError);
}

TEST_CASE("clear_sky_irradiance vanishes at and below the horizon") {
    const ClearSkyParams defaults;
    for (double zenith : {90.0, 90.0001, 120.0, 180.0})
        CHECK(clear_sky_irradiance(SolarPosition{zenith, 0.0}, defaults, 94) == 0.0);
    const ClearSkyParams other(1.2, 0.5, -0.01, 1400.0);
    CHECK(clear_sky_irradiance(SolarPosition{90.0, 0.0}, other, 180) == 0.0);
}

TEST_CASE("clear_sky_irradiance at zenith 0 with default coefficients") {
    const ClearSkyParams defaults;
    // day 94: eccentricity ~0.9984
    CHECK(clear_sky_irradiance(SolarPosition{0.0, 0.0}, defaults, 94) ==
          doctest::Approx(1124.8231922641762).epsilon(1e-12));
    // eccentricity exactly 1: E0 * a
    CHECK(clear_sky_irradiance(SolarPosition{0.0, 0.0}, defaults, 91.25) ==
          doctest::Approx(1361.1 * 0.8277).epsilon(1e-9));
}

TEST_CASE("clear_sky_irradiance is non-increasing in zenith with defaults") {
    const ClearSkyParams defaults;
    double prev = clear_sky_irradiance(SolarPosition{0.0, 0.0}, defaults, 94);
    for (double z = 0.5; z <= 90.0; z += 0.5) {
        const double g = clear_sky_irradiance(SolarPosition{z, 0.0}, defaults, 94);
        CHECK(g <= prev);
        prev = g;
    }
}

TEST_CASE("fit_linear_map recovers an exact line") {
    std::vector<std::pair<double, double>> pairs;
    for (double g : {1.0, 2.0, 5.0, 9.0})
        pairs.emplace_back(g, 3.0 * g + 7.0);
    const LinearMap map = fit_linear_map(pairs);
    CHECK(map.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(map.intercept == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(map.fit_r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(map.n == 4);
}

TEST_CASE("fit_linear_map matches the hand-computed normal equations") {
    const std::vector<std::pair<double, double>> pairs{{1.0, 1.0}, {2.0, 2.0}, {3.0, 4.0}};
    const LinearMap map = fit_linear_map(pairs);
    CHECK(map.slope == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(map.intercept == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("fit_linear_map rejects degenerate inputs") {
    CHECK_THROWS_AS(fit_linear_map(std::vector<std::pair<double, double>>{{1.0, 2.0}}),
                    ValidationError);
    CHECK_THROWS_AS(
        fit_linear_map(std::vector<std::pair<double, double>>{{4.0, 1.0}, {4.0, 2.0}, {4.0, 3.0}}),
        ValidationError);
}

TEST_CASE("fit_linear_map recovers a planted map on noiseless pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> g_dist(100.0, 1100.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double m = std::uniform_real_distribution<double>(0.5, 30.0)(rng);
        const double q = std::uniform_real_distribution<double>(-500.0, 5000.0)(rng);
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < 40; ++i) {
            const double g = g_dist(rng);
            pairs.emplace_back(g, m * g + q);
        }
        const LinearMap map = fit_linear_map(pairs);
        CHECK(map.slope == doctest::Approx(m).epsilon(1e-9));
        CHECK(map.intercept == doctest::Approx(q).epsilon(1e-9));
    }
}

TEST_CASE("fit_linear_map residuals sum to zero and are orthogonal to g") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> g_dist(0.0, 1000.0);
    std::uniform_real_distribution<double> noise(-50.0, 50.0);
    std::vector<std::pair<double, double>> pairs;
    double sum_abs_l = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double g = g_dist(rng);
        const double l = 12.0 * g + 300.0 + noise(rng);
        pairs.emplace_back(g, l);
        sum_abs_l += std::fabs(l);
    }
    const LinearMap map = fit_linear_map(pairs);
    double sum_r = 0.0, sum_rg = 0.0, sum_abs_rg = 0.0;
    for (const auto& [g, l] : pairs) {
        const double r = l - (map.slope * g + map.intercept);
        sum_r += r;
        sum_rg += r * g;
        sum_abs_rg += std::fabs(r * g);
    }
    CHECK(std::fabs(sum_r) <= 1e-9 * sum_abs_l);
    CHECK(std::fabs(sum_rg) <= 1e-9 * sum_abs_rg);
}

TEST_CASE("fit_linear_map without intercept goes through the origin") {
    std::vector<std::pair<double, double>> pairs;
    for (double g : {1.0, 2.0, 3.0, 4.0})
        pairs.emplace_back(g, 5.0 * g);
    const LinearMap map = fit_linear_map(pairs, false);
    CHECK(map.slope == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(map.intercept == 0.0);
    CHECK(map.fit_r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clear_sky_luminance applies the map and clamps at zero") {
    CHECK(clear_sky_luminance(0.0, LinearMap{2.0, 0.0, 1.0, 5}) == 0.0);
    CHECK(clear_sky_luminance(10.0, LinearMap{2.0, 1.0, 1.0, 5}) == doctest::Approx(21.0));
    CHECK(clear_sky_luminance(2.0, LinearMap{1.0, -5.0, 1.0, 5}) == 0.0);
}
