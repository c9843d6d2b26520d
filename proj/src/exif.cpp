#include "heliocot/exif.hpp"

#include <cstring>

namespace heliocot {

namespace {

constexpr std::uint16_t kTagExifIfd = 0x8769;
constexpr std::uint16_t kTagDateTime = 0x0132;
constexpr std::uint16_t kTagDateTimeOriginal = 0x9003;
constexpr std::uint16_t kTagExposureTime = 0x829A;
constexpr std::uint16_t kTagFNumber = 0x829D;
constexpr std::uint16_t kTagIsoSpeed = 0x8827;

struct TiffReader {
    std::span<const std::uint8_t> tiff;  // starts at the byte-order mark
    bool big_endian = false;

    std::uint16_t u16(std::size_t off) const {
        if (off + 2 > tiff.size()) return 0;
        return big_endian ? static_cast<std::uint16_t>(tiff[off] << 8 | tiff[off + 1])
                          : static_cast<std::uint16_t>(tiff[off + 1] << 8 | tiff[off]);
    }
    std::uint32_t u32(std::size_t off) const {
        if (off + 4 > tiff.size()) return 0;
        return big_endian ? (std::uint32_t{tiff[off]} << 24 | std::uint32_t{tiff[off + 1]} << 16 |
                             std::uint32_t{tiff[off + 2]} << 8 | tiff[off + 3])
                          : (std::uint32_t{tiff[off + 3]} << 24 | std::uint32_t{tiff[off + 2]} << 16 |
                             std::uint32_t{tiff[off + 1]} << 8 | tiff[off]);
    }
};

// TIFF field types: 2 = ASCII, 3 = SHORT, 4 = LONG, 5 = RATIONAL.
struct IfdEntry {
    std::uint16_t tag = 0;
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::size_t entry_off = 0;  // offset of the 12-byte entry within the TIFF block
};

std::optional<double> read_numeric(const TiffReader& r, const IfdEntry& e) {
    const std::size_t value_off = e.entry_off + 8;
    switch (e.type) {
    case 3:
        return static_cast<double>(r.u16(value_off));
    case 4:
        return static_cast<double>(r.u32(value_off));
    case 5: {
        const std::size_t data = r.u32(value_off);
        if (data + 8 > r.tiff.size()) return std::nullopt;
        const double num = r.u32(data);
        const double den = r.u32(data + 4);
        if (den == 0.0) return std::nullopt;
        return num / den;
    }
    default:
        return std::nullopt;
    }
}

std::optional<std::string> read_ascii(const TiffReader& r, const IfdEntry& e) {
    if (e.type != 2 || e.count == 0) return std::nullopt;
    std::size_t data = e.entry_off + 8;
    if (e.count > 4) data = r.u32(data);
    if (data + e.count > r.tiff.size()) return std::nullopt;
    std::string s(reinterpret_cast<const char*>(r.tiff.data() + data), e.count);
    while (!s.empty() && (s.back() == '\0' || s.back() == ' '))
        s.pop_back();
    return s;
}

void walk_ifd(const TiffReader& r, std::size_t ifd_off, ExifFields& out,
              std::size_t& exif_ifd_off) {
    const std::uint16_t n = r.u16(ifd_off);
    if (n == 0 || n > 512) return;
    for (std::uint16_t i = 0; i < n; ++i) {
        IfdEntry e;
        e.entry_off = ifd_off + 2 + static_cast<std::size_t>(i) * 12;
        if (e.entry_off + 12 > r.tiff.size()) return;
        e.tag = r.u16(e.entry_off);
        e.type = r.u16(e.entry_off + 2);
        e.count = r.u32(e.entry_off + 4);
        switch (e.tag) {
        case kTagExifIfd:
            exif_ifd_off = r.u32(e.entry_off + 8);
            break;
        case kTagDateTimeOriginal:
            out.datetime_original = read_ascii(r, e);
            break;
        case kTagDateTime:
            if (!out.datetime_original)
                out.datetime_original = read_ascii(r, e);
            break;
        case kTagExposureTime:
            out.exposure_s = read_numeric(r, e);
            break;
        case kTagFNumber:
            out.f_number = read_numeric(r, e);
            break;
        case kTagIsoSpeed:
            out.iso = read_numeric(r, e);
            break;
        default:
            break;
        }
    }
}

} // namespace

ExifFields read_exif(std::span<const std::uint8_t> bytes) {
    ExifFields out;
    if (bytes.size() < 4 || bytes[0] != 0xFF || bytes[1] != 0xD8)
        return out;  // not a JPEG

    // Walk JPEG segments looking for APP1 "Exif\0\0".
    std::size_t pos = 2;
    while (pos + 4 <= bytes.size()) {
        if (bytes[pos] != 0xFF)
            return out;
        const std::uint8_t marker = bytes[pos + 1];
        if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7)) {
            pos += 2;
            continue;
        }
        if (marker == 0xDA || marker == 0xD9)
            return out;  // image data reached, no EXIF ahead
        const std::size_t len = static_cast<std::size_t>(bytes[pos + 2]) << 8 | bytes[pos + 3];
        if (len < 2 || pos + 2 + len > bytes.size())
            return out;
        if (marker == 0xE1 && len >= 8 + 6 &&
            std::memcmp(bytes.data() + pos + 4, "Exif\0\0", 6) == 0) {
            const std::span<const std::uint8_t> tiff = bytes.subspan(pos + 10, len - 8);
            if (tiff.size() < 8)
                return out;
            TiffReader r{tiff, false};
            if (tiff[0] == 'M' && tiff[1] == 'M')
                r.big_endian = true;
            else if (!(tiff[0] == 'I' && tiff[1] == 'I'))
                return out;
            if (r.u16(2) != 42)
                return out;
            std::size_t exif_ifd = 0;
            walk_ifd(r, r.u32(4), out, exif_ifd);
            if (exif_ifd != 0) {
                std::size_t unused = 0;
                walk_ifd(r, exif_ifd, out, unused);
            }
            return out;
        }
        pos += 2 + len;
    }
    return out;
}

} // namespace heliocot
