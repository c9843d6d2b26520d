#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace heliocot {

// The subset of EXIF this pipeline needs. Fields stay empty when the file
// carries no EXIF or lacks the tag; the sidecar CSV fills the gaps.
struct ExifFields {
    std::optional<std::string> datetime_original;  // "YYYY:MM:DD HH:MM:SS"
    std::optional<double> exposure_s;
    std::optional<double> iso;
    std::optional<double> f_number;

    bool any() const {
        return datetime_original || exposure_s || iso || f_number;
    }
};

// Scans a JPEG byte stream for the APP1/TIFF EXIF block and pulls the four
// fields above. Non-JPEG input or malformed EXIF yields empty fields rather
// than an error; absence is handled at the metadata-merge step.
ExifFields read_exif(std::span<const std::uint8_t> bytes);

} // namespace heliocot
