#include "heliocot/image_io.hpp"

#include <algorithm>
#include <cstdio>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"
#include "heliocot/exif.hpp"
#include "heliocot/io_util.hpp"

namespace heliocot {

namespace {

constexpr std::string_view kSidecarHeader = "filename,timestamp_utc,exposure_s,iso,f_number";

// "YYYY:MM:DD HH:MM:SS" as written by cameras.
UtcInstant parse_exif_datetime(const std::string& text, double utc_offset_hours) {
    int y, mo, d, h, mi, s;
    if (std::sscanf(text.c_str(), "%4d:%2d:%2d %2d:%2d:%2d", &y, &mo, &d, &h, &mi, &s) != 6)
        throw ParseError("bad EXIF datetime '" + text + "'");
    const auto local = UtcInstant::from_civil(y, mo, d, h, mi, s);
    return local.plus_seconds(-static_cast<std::int64_t>(utc_offset_hours * 3600.0));
}

bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

} // namespace

std::vector<SidecarRow> parse_exif_sidecar(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw ParseError("empty exif sidecar");
    csv::expect_header(lines[0], kSidecarHeader);

    std::vector<SidecarRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        const auto fields = csv::split_fields(lines[i]);
        if (fields.size() != 5)
            throw ParseError("expected 5 fields", line_no);
        SidecarRow row;
        row.filename = std::string(fields[0]);
        try {
            row.meta.timestamp = UtcInstant::parse_iso8601(fields[1]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        row.meta.exposure_s = csv::parse_number(fields[2], line_no);
        row.meta.iso = csv::parse_number(fields[3], line_no);
        row.meta.f_number = csv::parse_number(fields[4], line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string serialize_exif_sidecar(std::span<const SidecarRow> rows) {
    std::string out{kSidecarHeader};
    out += '\n';
    for (const auto& row : rows) {
        out += row.filename;
        out += ',';
        out += row.meta.timestamp.to_iso8601();
        out += ',';
        out += csv::format_number(row.meta.exposure_s);
        out += ',';
        out += csv::format_number(row.meta.iso);
        out += ',';
        out += csv::format_number(row.meta.f_number);
        out += '\n';
    }
    return out;
}

SkyImage load_sky_image(const std::filesystem::path& path,
                        const std::map<std::string, ExposureMeta>* sidecar,
                        double exif_utc_offset_hours) {
    const std::string bytes = read_file(path);
    const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                      const_cast<char*>(bytes.data()));
    cv::Mat bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
    if (bgr.empty())
        throw ValidationError("cannot decode image " + path.string());

    SkyImage img;
    img.width = bgr.cols;
    img.height = bgr.rows;
    img.rgb.resize(static_cast<std::size_t>(bgr.cols) * bgr.rows * 3);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            const std::size_t at = (static_cast<std::size_t>(y) * bgr.cols + x) * 3;
            img.rgb[at + 0] = row[x][2];
            img.rgb[at + 1] = row[x][1];
            img.rgb[at + 2] = row[x][0];
        }
    }

    const ExifFields exif =
        read_exif({reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()});
    const ExposureMeta* fallback = nullptr;
    if (sidecar) {
        const auto it = sidecar->find(path.filename().string());
        if (it != sidecar->end())
            fallback = &it->second;
    }

    if (exif.datetime_original)
        img.meta.timestamp = parse_exif_datetime(*exif.datetime_original, exif_utc_offset_hours);
    else if (fallback)
        img.meta.timestamp = fallback->timestamp;
    else
        throw MetadataError("timestamp");

    img.meta.exposure_s = exif.exposure_s ? *exif.exposure_s
                          : fallback      ? fallback->exposure_s
                                          : 0.0;
    if (!(img.meta.exposure_s > 0.0))
        throw MetadataError("exposure_s");
    img.meta.iso = exif.iso ? *exif.iso : fallback ? fallback->iso : 0.0;
    if (!(img.meta.iso > 0.0))
        throw MetadataError("iso");
    img.meta.f_number = exif.f_number ? *exif.f_number : fallback ? fallback->f_number : 0.0;
    if (!(img.meta.f_number > 0.0))
        throw MetadataError("f_number");
    return img;
}

void write_png(const std::filesystem::path& path, const SkyImage& img) {
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            const std::size_t at = (static_cast<std::size_t>(y) * img.width + x) * 3;
            row[x] = cv::Vec3b(img.rgb[at + 2], img.rgb[at + 1], img.rgb[at + 0]);
        }
    }
    std::vector<std::uint8_t> buf;
    if (!cv::imencode(".png", bgr, buf, {cv::IMWRITE_PNG_COMPRESSION, 1}))
        throw IoError("PNG encode failed for " + path.string());
    atomic_write_file(path, std::string_view(reinterpret_cast<const char*>(buf.data()), buf.size()));
}

std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && has_image_extension(entry.path()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace heliocot
