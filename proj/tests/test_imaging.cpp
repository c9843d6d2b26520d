#include <doctest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "heliocot/errors.hpp"
#include "heliocot/imaging.hpp"

using namespace heliocot;

namespace {

SkyImage uniform_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    SkyImage img;
    img.width = w;
    img.height = h;
    img.rgb.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        img.rgb[i] = r;
        img.rgb[i + 1] = g;
        img.rgb[i + 2] = b;
    }
    img.meta = ExposureMeta{UtcInstant::from_civil(2015, 6, 1, 5, 0, 0), 0.002, 100.0, 8.0};
    return img;
}

} // namespace

TEST_CASE("relative_luminance endpoints") {
    CHECK(relative_luminance(255, 255, 255) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(relative_luminance(0, 0, 0) == 0.0);
}

TEST_CASE("relative_luminance of mid gray matches the hand evaluation") {
    // ((128/255 + 0.055) / 1.055)^2.4 on all three channels
    CHECK(relative_luminance(128, 128, 128) ==
          doctest::Approx(0.21586050011389923).epsilon(1e-14));
    CHECK(relative_luminance(64, 128, 192) ==
          doctest::Approx(0.20334102860774203).epsilon(1e-14));
}

TEST_CASE("relative_luminance is monotone in each channel") {
    for (int base : {0, 3, 40, 100, 200, 254}) {
        const auto v = static_cast<std::uint8_t>(base);
        const auto w = static_cast<std::uint8_t>(base + 1);
        CHECK(relative_luminance(w, v, v) > relative_luminance(v, v, v));
        CHECK(relative_luminance(v, w, v) > relative_luminance(v, v, v));
        CHECK(relative_luminance(v, v, w) > relative_luminance(v, v, v));
    }
}

TEST_CASE("circumsolar_luminance over a uniform white image is 1") {
    const auto img = uniform_image(64, 64, 255, 255, 255);
    for (double radius : {1.0, 5.0, 20.0}) {
        const auto disk = circumsolar_luminance(img, 32.0, 32.0, radius);
        CHECK(disk.y_mean == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(disk.n_pixels > 0);
    }
}

TEST_CASE("circumsolar_luminance over uniform gray is position-invariant") {
    const auto img = uniform_image(64, 64, 128, 128, 128);
    const double expected = 0.21586050011389923;
    const std::vector<std::tuple<double, double, double>> placements{
        {32.0, 32.0, 10.0}, {5.0, 5.0, 8.0}, {60.0, 10.0, 12.0}, {0.0, 63.0, 3.0}};
    for (const auto& [sx, sy, radius] : placements) {
        const auto disk = circumsolar_luminance(img, sx, sy, radius);
        CHECK(disk.y_mean == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("circumsolar_luminance sees only the planted disk") {
    auto img = uniform_image(100, 100, 10, 10, 10);
    const double sun_x = 40.0, sun_y = 60.0, radius = 8.0;
    // plant a brighter disk with margin over the sampling radius
    for (int y = 0; y < 100; ++y)
        for (int x = 0; x < 100; ++x)
            if (std::hypot(x - sun_x, y - sun_y) <= radius + 2.0) {
                const std::size_t at = (static_cast<std::size_t>(y) * 100 + x) * 3;
                img.rgb[at] = img.rgb[at + 1] = img.rgb[at + 2] = 200;
            }
    const auto disk = circumsolar_luminance(img, sun_x, sun_y, radius);
    CHECK(disk.y_mean == doctest::Approx(relative_luminance(200, 200, 200)).epsilon(1e-12));
}

TEST_CASE("circumsolar_luminance counts pixels in the clipped disk") {
    const auto img = uniform_image(16, 16, 50, 50, 50);
    const auto center = circumsolar_luminance(img, 8.0, 8.0, 1.0);
    CHECK(center.n_pixels == 5);  // center + 4-neighborhood
    const auto corner = circumsolar_luminance(img, 0.0, 0.0, 1.0);
    CHECK(corner.n_pixels == 3);  // clipped at the frame corner
}

TEST_CASE("circumsolar_luminance rejects a sun outside the frame") {
    const auto img = uniform_image(16, 16, 50, 50, 50);
    CHECK_THROWS_AS(circumsolar_luminance(img, 20.0, 8.0, 2.0), ValidationError);
}

TEST_CASE("mask_saturated can empty the disk") {
    const auto img = uniform_image(16, 16, 255, 255, 255);
    CHECK_THROWS_AS(circumsolar_luminance(img, 8.0, 8.0, 2.0, true), ValidationError);
    // unmasked saturated pixels are included by default
    CHECK(circumsolar_luminance(img, 8.0, 8.0, 2.0).y_mean == doctest::Approx(1.0));
}

TEST_CASE("normalize_exposure evaluates the exposure equation") {
    const ExposureMeta meta{UtcInstant::from_civil(2015, 1, 1, 12, 0, 0), 0.001, 100.0, 8.0};
    CHECK(normalize_exposure(0.5, meta) == doctest::Approx(32000.0).epsilon(1e-12));
    CHECK(normalize_exposure(0.0, meta) == 0.0);
}

TEST_CASE("normalize_exposure reciprocity: doubling time halves the result") {
    ExposureMeta meta{UtcInstant::from_civil(2015, 1, 1, 12, 0, 0), 0.004, 200.0, 5.6};
    const double base = normalize_exposure(0.37, meta);
    meta.exposure_s *= 2.0;
    CHECK(normalize_exposure(0.37, meta) == doctest::Approx(base / 2.0).epsilon(1e-12));
}

TEST_CASE("normalize_exposure is linear in luminance") {
    const ExposureMeta meta{UtcInstant::from_civil(2015, 1, 1, 12, 0, 0), 0.01, 400.0, 2.8};
    const double unit = normalize_exposure(1.0, meta);
    for (double y : {0.1, 0.25, 0.5, 0.9})
        CHECK(normalize_exposure(y, meta) == doctest::Approx(y * unit).epsilon(1e-12));
}

TEST_CASE("extract_sample returns night for a midnight frame") {
    auto img = uniform_image(256, 256, 120, 120, 120);
    img.meta.timestamp = UtcInstant::from_civil(2015, 6, 1, 17, 0, 0);  // 01:00 local
    const GeoLocation site(1.3483, 103.6831);
    const CameraModel cam(256, 256, 127.5, 127.5, 115.0);
    CHECK_FALSE(extract_sample(img, site, cam, 10.0).has_value());
}

TEST_CASE("extract_sample names the missing metadata field") {
    auto img = uniform_image(256, 256, 120, 120, 120);
    img.meta.iso = 0.0;
    const GeoLocation site(1.3483, 103.6831);
    const CameraModel cam(256, 256, 127.5, 127.5, 115.0);
    try {
        extract_sample(img, site, cam, 10.0);
        FAIL("expected MetadataError");
    } catch (const MetadataError& e) {
        CHECK(e.field() == "iso");
    }
}

TEST_CASE("extract_sample is deterministic over identical bytes") {
    auto img = uniform_image(256, 256, 90, 130, 170);
    img.meta.timestamp = UtcInstant::from_civil(2015, 6, 1, 5, 0, 0);  // 13:00 local
    const GeoLocation site(1.3483, 103.6831);
    const CameraModel cam(256, 256, 127.5, 127.5, 115.0);
    const auto a = extract_sample(img, site, cam, 10.0);
    const auto b = extract_sample(img, site, cam, 10.0);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->y_raw == b->y_raw);
    CHECK(a->l_norm == b->l_norm);
    CHECK(a->n_pixels == b->n_pixels);
    CHECK(a->y_raw == doctest::Approx(relative_luminance(90, 130, 170)).epsilon(1e-12));
}

TEST_CASE("luminance CSV round-trips") {
    const std::vector<LuminanceSample> samples{
        {UtcInstant::from_civil(2015, 3, 1, 4, 0, 0), 0.5, 16000.0, 317},
        {UtcInstant::from_civil(2015, 3, 1, 4, 2, 0), 0.25, 8000.5, 317}};
    const auto text = serialize_luminance_csv(samples);
    const auto parsed = parse_luminance_csv(text);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[1].l_norm == 8000.5);
    CHECK(serialize_luminance_csv(parsed) == text);
}
