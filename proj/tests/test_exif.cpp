#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "heliocot/errors.hpp"
#include "heliocot/exif.hpp"
#include "heliocot/image_io.hpp"
#include "heliocot/io_util.hpp"

using namespace heliocot;
namespace fs = std::filesystem;

namespace {

// Builds a TIFF block with IFD0 {DateTime, ExifIFD} and an Exif IFD holding
// ExposureTime (rational), FNumber (rational), ISO (short), DateTimeOriginal.
struct TiffBuilder {
    bool big_endian = false;
    std::vector<std::uint8_t> bytes;

    void u16(std::uint16_t v) {
        if (big_endian) {
            bytes.push_back(static_cast<std::uint8_t>(v >> 8));
            bytes.push_back(static_cast<std::uint8_t>(v));
        } else {
            bytes.push_back(static_cast<std::uint8_t>(v));
            bytes.push_back(static_cast<std::uint8_t>(v >> 8));
        }
    }
    void u32(std::uint32_t v) {
        if (big_endian) {
            u16(static_cast<std::uint16_t>(v >> 16));
            u16(static_cast<std::uint16_t>(v));
        } else {
            u16(static_cast<std::uint16_t>(v));
            u16(static_cast<std::uint16_t>(v >> 16));
        }
    }
    void entry(std::uint16_t tag, std::uint16_t type, std::uint32_t count, std::uint32_t value) {
        u16(tag);
        u16(type);
        u32(count);
        u32(value);
    }
    // inline SHORT: left-justified within the 4-byte value field
    void entry_short(std::uint16_t tag, std::uint16_t value) {
        u16(tag);
        u16(3);
        u32(1);
        u16(value);
        u16(0);
    }
};

std::vector<std::uint8_t> build_tiff(bool big_endian, const std::string& datetime,
                                     std::uint32_t exp_num, std::uint32_t exp_den,
                                     std::uint32_t f_num, std::uint32_t f_den, std::uint16_t iso) {
    TiffBuilder b;
    b.big_endian = big_endian;
    // layout: header(8) IFD0(2+2*12+4=30) ExifIFD(2+4*12+4=54) data
    const std::uint32_t ifd0 = 8;
    const std::uint32_t exif_ifd = ifd0 + 30;
    const std::uint32_t data = exif_ifd + 54;

    b.bytes.push_back(big_endian ? 'M' : 'I');
    b.bytes.push_back(big_endian ? 'M' : 'I');
    b.u16(42);
    b.u32(ifd0);

    b.u16(2);  // IFD0: 2 entries
    b.entry(0x0132, 2, 20, data);       // DateTime -> first string slot
    b.entry(0x8769, 4, 1, exif_ifd);    // Exif IFD pointer
    b.u32(0);

    b.u16(4);  // Exif IFD: 4 entries
    b.entry(0x829A, 5, 1, data + 40);       // ExposureTime rational
    b.entry(0x829D, 5, 1, data + 48);       // FNumber rational
    b.entry_short(0x8827, iso);             // ISO, inline short
    b.entry(0x9003, 2, 20, data + 20);      // DateTimeOriginal -> second slot
    b.u32(0);

    // data area: two 20-byte datetime strings, then two rationals
    auto push_dt = [&](const std::string& s) {
        for (char c : s)
            b.bytes.push_back(static_cast<std::uint8_t>(c));
        b.bytes.push_back(0);
    };
    push_dt("2001:01:01 00:00:00");  // stale IFD0 DateTime, must lose
    push_dt(datetime);
    b.u32(exp_num);
    b.u32(exp_den);
    b.u32(f_num);
    b.u32(f_den);
    return b.bytes;
}

// Minimal JPEG: SOI + APP1(Exif) + the rest of an encoder-produced stream.
std::vector<std::uint8_t> jpeg_with_exif(const std::vector<std::uint8_t>& tiff) {
    // a tiny baseline JPEG body from a real encode is overkill; the metadata
    // walker stops at the first APP1, so SOI + APP1 + EOI suffices
    std::vector<std::uint8_t> out{0xFF, 0xD8};
    const std::size_t len = 2 + 6 + tiff.size();
    out.push_back(0xFF);
    out.push_back(0xE1);
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(len & 0xFF));
    for (char c : {'E', 'x', 'i', 'f', '\0', '\0'})
        out.push_back(static_cast<std::uint8_t>(c));
    out.insert(out.end(), tiff.begin(), tiff.end());
    out.push_back(0xFF);
    out.push_back(0xD9);
    return out;
}

} // namespace

TEST_CASE("read_exif pulls the four fields from a little-endian block") {
    const auto jpeg =
        jpeg_with_exif(build_tiff(false, "2015:03:01 12:34:56", 1, 500, 8, 1, 100));
    const ExifFields exif = read_exif(jpeg);
    REQUIRE(exif.datetime_original.has_value());
    CHECK(*exif.datetime_original == "2015:03:01 12:34:56");
    CHECK(*exif.exposure_s == doctest::Approx(0.002));
    CHECK(*exif.f_number == doctest::Approx(8.0));
    CHECK(*exif.iso == doctest::Approx(100.0));
}

TEST_CASE("read_exif honors big-endian byte order") {
    const auto jpeg =
        jpeg_with_exif(build_tiff(true, "2016:06:07 01:02:03", 1, 250, 56, 10, 400));
    const ExifFields exif = read_exif(jpeg);
    REQUIRE(exif.datetime_original.has_value());
    CHECK(*exif.datetime_original == "2016:06:07 01:02:03");
    CHECK(*exif.exposure_s == doctest::Approx(0.004));
    CHECK(*exif.f_number == doctest::Approx(5.6));
    CHECK(*exif.iso == doctest::Approx(400.0));
}

TEST_CASE("read_exif yields nothing for non-JPEG bytes or truncated blocks") {
    const std::vector<std::uint8_t> png{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    CHECK_FALSE(read_exif(png).any());
    auto jpeg = jpeg_with_exif(build_tiff(false, "2015:03:01 12:34:56", 1, 500, 8, 1, 100));
    jpeg.resize(jpeg.size() / 2);  // cut through the TIFF block
    CHECK_NOTHROW(read_exif(jpeg));  // truncation must not crash the walker
}

TEST_CASE("load_sky_image reads embedded EXIF from a real JPEG and shifts local time") {
    // encode a real JPEG, then splice our APP1 block in right after SOI
    cv::Mat bgr(12, 16, CV_8UC3, cv::Scalar(40, 60, 80));
    std::vector<std::uint8_t> encoded;
    REQUIRE(cv::imencode(".jpg", bgr, encoded));
    REQUIRE(encoded.size() > 2);
    const auto tiff = build_tiff(false, "2015:03:01 12:00:00", 1, 500, 8, 1, 100);
    const auto app1 = jpeg_with_exif(tiff);  // SOI + APP1 + EOI
    std::vector<std::uint8_t> with_exif(encoded.begin(), encoded.begin() + 2);
    with_exif.insert(with_exif.end(), app1.begin() + 2, app1.end() - 2);  // APP1 only
    with_exif.insert(with_exif.end(), encoded.begin() + 2, encoded.end());

    const fs::path dir = fs::temp_directory_path() / "heliocot_exif_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    atomic_write_file(dir / "frame.jpg",
                      std::string_view(reinterpret_cast<const char*>(with_exif.data()),
                                       with_exif.size()));

    // no sidecar: all metadata must come from the embedded EXIF, with the
    // zone-less datetime shifted to UTC by the +8h site offset
    const SkyImage img = load_sky_image(dir / "frame.jpg", nullptr, 8.0);
    CHECK(img.width == 16);
    CHECK(img.height == 12);
    CHECK(img.meta.timestamp.to_iso8601() == "2015-03-01T04:00:00Z");
    CHECK(img.meta.exposure_s == doctest::Approx(0.002));
    CHECK(img.meta.iso == doctest::Approx(100.0));
    CHECK(img.meta.f_number == doctest::Approx(8.0));

    // embedded fields win over a conflicting sidecar entry
    std::map<std::string, ExposureMeta> sidecar;
    sidecar["frame.jpg"] =
        ExposureMeta{UtcInstant::from_civil(1999, 1, 1, 0, 0, 0), 0.5, 1600.0, 1.4};
    const SkyImage merged = load_sky_image(dir / "frame.jpg", &sidecar, 8.0);
    CHECK(merged.meta.timestamp.to_iso8601() == "2015-03-01T04:00:00Z");
    CHECK(merged.meta.exposure_s == doctest::Approx(0.002));
    fs::remove_all(dir);
}

TEST_CASE("a PNG without sidecar coverage reports the missing field") {
    SkyImage tiny;
    tiny.width = 8;
    tiny.height = 8;
    tiny.rgb.assign(8 * 8 * 3, 128);
    const fs::path dir = fs::temp_directory_path() / "heliocot_exif_missing";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_png(dir / "frame.png", tiny);

    CHECK_THROWS_AS(load_sky_image(dir / "frame.png"), MetadataError);
    std::map<std::string, ExposureMeta> partial;
    partial["frame.png"] =
        ExposureMeta{UtcInstant::from_civil(2015, 3, 1, 4, 0, 0), 0.002, 0.0, 8.0};
    try {
        load_sky_image(dir / "frame.png", &partial);
        FAIL("expected MetadataError");
    } catch (const MetadataError& e) {
        CHECK(e.field() == "iso");
    }
    fs::remove_all(dir);
}
