#include "heliocot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "heliocot/clearsky.hpp"
#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"
#include "heliocot/image_io.hpp"
#include "heliocot/imaging.hpp"
#include "heliocot/io_util.hpp"

namespace heliocot {

namespace {

// Inverse sRGB transfer: linear [0, 1] -> 8-bit code value.
int srgb_encode(double linear) {
    const double u = linear <= 0.0031308 ? 12.92 * linear
                                         : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
    return static_cast<int>(std::lround(u * 255.0));
}

UtcInstant parse_date(const std::string& text) {
    int y, mo, d;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d", &y, &mo, &d) != 3 || text.size() != 10)
        throw ValidationError("bad synth start_date '" + text + "' (expected YYYY-MM-DD)");
    return UtcInstant::from_civil(y, mo, d, 0, 0, 0);
}

std::int64_t parse_overpass_offset(const std::string& text) {
    int h, m;
    if (std::sscanf(text.c_str(), "%2d:%2d", &h, &m) != 2 || text.size() != 5 ||
        h < 0 || h > 23 || m < 0 || m > 59)
        throw ValidationError("bad synth overpass time '" + text + "' (expected HH:MM)");
    return h * 3600LL + m * 60LL;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t frame) {
    std::uint64_t x = seed ^ (frame + 0x9E3779B97F4A7C15ULL);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

void render_frame(SkyImage& img, const CameraModel& cam, double sun_x, double sun_y,
                  double disk_radius_px, int background_gray, int disk_gray,
                  double noise_sigma, std::uint64_t frame_seed) {
    img.width = cam.image_width_px;
    img.height = cam.image_height_px;
    img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3,
                   static_cast<std::uint8_t>(background_gray));

    const int x_lo = std::max(0, static_cast<int>(std::floor(sun_x - disk_radius_px)));
    const int x_hi = std::min(img.width - 1, static_cast<int>(std::ceil(sun_x + disk_radius_px)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(sun_y - disk_radius_px)));
    const int y_hi = std::min(img.height - 1, static_cast<int>(std::ceil(sun_y + disk_radius_px)));
    const double r2 = disk_radius_px * disk_radius_px;
    for (int y = y_lo; y <= y_hi; ++y) {
        const double dy = y - sun_y;
        for (int x = x_lo; x <= x_hi; ++x) {
            const double dx = x - sun_x;
            if (dx * dx + dy * dy > r2)
                continue;
            const std::size_t at = (static_cast<std::size_t>(y) * img.width + x) * 3;
            img.rgb[at] = img.rgb[at + 1] = img.rgb[at + 2] =
                static_cast<std::uint8_t>(disk_gray);
        }
    }

    if (noise_sigma > 0.0) {
        std::mt19937_64 rng(frame_seed);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (auto& byte : img.rgb) {
            const int v = static_cast<int>(std::lround(byte + noise(rng)));
            byte = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
}

} // namespace

SynthSummary synth_dataset(const PipelineConfig& cfg, const std::filesystem::path& out_dir) {
    const SynthParams& sp = cfg.synth;
    const UtcInstant start = parse_date(sp.start_date);
    std::vector<std::int64_t> overpass_offsets;
    overpass_offsets.reserve(sp.overpass_utc.size());
    for (const auto& text : sp.overpass_utc)
        overpass_offsets.push_back(parse_overpass_offset(text));

    const std::int64_t span_s = static_cast<std::int64_t>(std::llround(sp.span_min * 60.0));
    const std::int64_t cadence_s = static_cast<std::int64_t>(std::llround(sp.cadence_min * 60.0));
    if (cadence_s <= 0)
        throw ValidationError("synth cadence below 1 second");

    const double disk_radius = sp.disk_scale * cfg.circumsolar_radius_px;
    const double base_ev =
        cfg.synth.f_number * cfg.synth.f_number / (sp.exposure_s * sp.iso / 100.0);

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "images", ec);
    if (ec)
        throw IoError("cannot create " + (out_dir / "images").string());

    std::vector<CotGrid> grids;
    std::vector<SidecarRow> sidecar;
    std::string truth{"timestamp_utc,true_l_norm,true_lum_diff\n"};
    std::string flags{"timestamp_utc,is_clear\n"};

    SynthSummary summary;
    std::uint64_t frame_index = 0;
    const int n_overpasses = sp.days * static_cast<int>(overpass_offsets.size());
    for (int op = 0; op < n_overpasses; ++op) {
        const int day = op / static_cast<int>(overpass_offsets.size());
        const std::int64_t op_offset =
            overpass_offsets[static_cast<std::size_t>(op) % overpass_offsets.size()];
        const UtcInstant overpass =
            start.plus_seconds(day * 86400LL + op_offset);
        const double cot = sp.cot_cycle[static_cast<std::size_t>(op) % sp.cot_cycle.size()];

        CotGrid grid;
        grid.timestamp = overpass;
        grid.values.fill(cot);
        grids.push_back(grid);

        int frames_this_overpass = 0;
        for (std::int64_t off = -span_s; off <= span_s; off += cadence_s) {
            const UtcInstant t = overpass.plus_seconds(off);
            const SolarPosition sun = solar_position(t, cfg.site);
            if (sun.elevation_deg() <= 0.0)
                continue;
            const SunProjection proj = project_sun(sun, cfg.camera);
            if (!proj.visible())
                continue;

            const double g_c = clear_sky_irradiance(sun, cfg.clear_sky,
                                                    t.day_of_year_fractional());
            const double l_clear = sp.map_slope * g_c + sp.map_intercept;
            const double l_target = l_clear + sp.planted_slope * (cot / kCotMax);
            if (!(l_target > 0.0))
                throw ValidationError("synth config: target luminance not positive at " +
                                      t.to_iso8601());

            const bool alt = frame_index % 2 == 1;
            const double exposure_s = alt ? sp.exposure_s * sp.exposure_alt_factor
                                          : sp.exposure_s;
            const double ev = alt ? base_ev / sp.exposure_alt_factor : base_ev;
            const double y_target = l_target / ev;
            if (y_target < 0.02 || y_target > 0.98)
                throw ValidationError("synth config: disk luminance " +
                                      csv::format_number(y_target) +
                                      " too close to saturation at " + t.to_iso8601());

            const int gray = std::clamp(srgb_encode(y_target), 1, 254);
            const double y_quant = relative_luminance(static_cast<std::uint8_t>(gray),
                                                      static_cast<std::uint8_t>(gray),
                                                      static_cast<std::uint8_t>(gray));

            SkyImage img;
            render_frame(img, cfg.camera, proj.x_px, proj.y_px, disk_radius,
                         sp.background_gray, gray, sp.noise_sigma,
                         mix_seed(sp.seed, frame_index));
            char name[32];
            std::snprintf(name, sizeof name, "img_%05llu.png",
                          static_cast<unsigned long long>(frame_index));
            img.meta = ExposureMeta{t, exposure_s, sp.iso, sp.f_number};
            write_png(out_dir / "images" / name, img);

            sidecar.push_back(SidecarRow{name, img.meta});
            const double l_quant = normalize_exposure(y_quant, img.meta);
            truth += t.to_iso8601();
            truth += ',';
            truth += csv::format_number(l_quant);
            truth += ',';
            truth += csv::format_number(l_quant - l_clear);
            truth += '\n';
            flags += t.to_iso8601();
            flags += cot == 0.0 ? ",1\n" : ",0\n";

            ++frame_index;
            ++frames_this_overpass;
        }
        if (frames_this_overpass == 0)
            throw ValidationError("synth config: sun never above horizon in the window around " +
                                  overpass.to_iso8601());
        ++summary.overpasses;
        summary.frames += frames_this_overpass;
    }

    atomic_write_file(out_dir / "cot.csv", serialize_cot_csv(grids));
    atomic_write_file(out_dir / "images" / "exif.csv", serialize_exif_sidecar(sidecar));
    atomic_write_file(out_dir / "truth.csv", truth);
    atomic_write_file(out_dir / "clear_flags.csv", flags);
    return summary;
}

} // namespace heliocot
