#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heliocot/imaging.hpp"

namespace heliocot {

// One row of the exif.csv sidecar.
struct SidecarRow {
    std::string filename;
    ExposureMeta meta;
};

// exif.csv: header `filename,timestamp_utc,exposure_s,iso,f_number`.
std::vector<SidecarRow> parse_exif_sidecar(const std::string& text);
std::string serialize_exif_sidecar(std::span<const SidecarRow> rows);

// Decodes a PNG/JPEG into 8-bit RGB. Metadata comes from embedded EXIF when
// present, with the sidecar as fallback per field; EXIF timestamps (which
// carry no zone) are shifted by exif_utc_offset_hours to UTC. A field absent
// from both sources throws MetadataError naming it.
SkyImage load_sky_image(const std::filesystem::path& path,
                        const std::map<std::string, ExposureMeta>* sidecar = nullptr,
                        double exif_utc_offset_hours = 0.0);

// Encodes 8-bit RGB to PNG at the given path (atomic write).
void write_png(const std::filesystem::path& path, const SkyImage& img);

// All *.png/*.jpg/*.jpeg files in a directory, sorted by filename.
std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& dir);

} // namespace heliocot
