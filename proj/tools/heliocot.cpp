// Command-line driver: wires the sky-camera/COT pipeline stages together.
// Subcommands mirror the stage graph; `run-all` chains them over one config.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heliocot/config.hpp"
#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"
#include "heliocot/io_util.hpp"
#include "heliocot/stages.hpp"
#include "heliocot/synth.hpp"

namespace {

using namespace heliocot;

int g_verbosity = 0;

void log_info(const std::string& msg) {
    if (g_verbosity > 0)
        std::fprintf(stderr, "heliocot: %s\n", msg.c_str());
}

void log_warn(const std::string& msg) {
    std::fprintf(stderr, "heliocot: warning: %s\n", msg.c_str());
}

PipelineConfig resolve_config(const std::string& config_path) {
    if (config_path.empty())
        return default_config();
    log_info("config: " + config_path);
    return load_config(config_path);
}

struct AlignOverrides {
    std::optional<double> window_min;
    std::optional<std::string> anchor;
    std::optional<int> min_samples;
    std::optional<std::string> normalization;

    void apply(PipelineConfig& cfg) const {
        if (window_min)
            cfg.window_min = *window_min;
        if (min_samples)
            cfg.min_samples = *min_samples;
        if (anchor) {
            if (*anchor == "centered")
                cfg.window_anchor = WindowAnchor::centered;
            else if (*anchor == "trailing")
                cfg.window_anchor = WindowAnchor::trailing;
            else if (*anchor == "leading")
                cfg.window_anchor = WindowAnchor::leading;
            else
                throw ValidationError("--anchor must be centered|trailing|leading");
        }
        if (normalization) {
            if (*normalization == "signed")
                cfg.normalization = NormalizationMode::signed_diff;
            else if (*normalization == "absolute")
                cfg.normalization = NormalizationMode::absolute_diff;
            else
                throw ValidationError("--normalization must be signed|absolute");
        }
        if (!(cfg.window_min > 0.0))
            throw ValidationError("--window must be positive");
        if (cfg.min_samples < 1)
            throw ValidationError("--min-samples must be >= 1");
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sky-camera circumsolar luminance vs satellite cloud optical thickness"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "pipeline config file (TOML)")
        ->envname("HELIOCOT_CONFIG");
    app.add_flag("-v,--verbose", g_verbosity, "log progress to stderr");

    // solarpos
    auto* solarpos = app.add_subcommand("solarpos", "sun position for one instant");
    std::string at_text;
    double opt_lat = 0, opt_lon = 0, utc_offset = 0;
    solarpos->add_option("--at", at_text, "timestamp, ISO-8601 UTC (...Z)")->required();
    auto* lat_opt = solarpos->add_option("--lat", opt_lat, "latitude override, degrees north");
    auto* lon_opt = solarpos->add_option("--lon", opt_lon, "longitude override, degrees east");
    solarpos->add_option("--utc-offset", utc_offset,
                         "treat --at as local time with this UTC offset in hours");

    // luminance
    auto* luminance = app.add_subcommand("luminance", "extract circumsolar luminance series");
    std::string images_dir, lum_out = "luminance.csv", sidecar_arg;
    int jobs = 0;
    double exif_offset = 0.0;
    std::optional<double> radius_override;
    luminance->add_option("--images", images_dir, "directory of PNG/JPEG frames")->required();
    luminance->add_option("--out", lum_out, "output luminance.csv");
    luminance->add_option("--sidecar", sidecar_arg, "exif.csv sidecar (default: images dir)");
    luminance->add_option("--jobs", jobs, "worker threads (default: hardware)");
    luminance->add_option("--exif-utc-offset", exif_offset,
                          "UTC offset in hours of embedded EXIF timestamps");
    luminance->add_option("--radius", radius_override, "circumsolar radius in pixels");

    // clearsky
    auto* clearsky = app.add_subcommand("clearsky", "modeled clear-sky irradiance per frame");
    std::string cs_lum = "luminance.csv", cs_out = "clearsky.csv";
    clearsky->add_option("--lum", cs_lum, "input luminance.csv");
    clearsky->add_option("--out", cs_out, "output clearsky.csv");

    // fit-map
    auto* fit_map = app.add_subcommand("fit-map", "fit irradiance-to-luminance map on clear frames");
    std::string fm_lum = "luminance.csv", fm_gc = "clearsky.csv", fm_flags = "clear_flags.csv",
                fm_out = "clearsky_map.csv";
    bool no_intercept = false;
    fit_map->add_option("--lum", fm_lum, "input luminance.csv");
    fit_map->add_option("--gc", fm_gc, "input clearsky.csv");
    fit_map->add_option("--flags", fm_flags, "clear-sky labels CSV (timestamp_utc,is_clear)");
    fit_map->add_option("--out", fm_out, "output clearsky_map.csv");
    fit_map->add_flag("--no-intercept", no_intercept, "force the fit through the origin");

    // cot
    auto* cot_cmd = app.add_subcommand("cot", "reduce COT grids to 9-pixel means");
    std::string cot_in, cot_out = "cot_mean.csv";
    std::optional<int> min_valid_cells;
    cot_cmd->add_option("--in", cot_in, "input COT grid CSV")->required();
    cot_cmd->add_option("--out", cot_out, "output cot_mean.csv");
    cot_cmd->add_option("--min-valid-cells", min_valid_cells, "minimum valid cells per grid");

    // align
    auto* align_cmd = app.add_subcommand("align", "window luminance differences onto COT times");
    std::string al_lum = "luminance.csv", al_gc = "clearsky.csv", al_map = "clearsky_map.csv",
                al_cot = "cot_mean.csv", al_out = "aligned_pairs.csv";
    AlignOverrides align_overrides;
    align_cmd->add_option("--lum", al_lum, "input luminance.csv");
    align_cmd->add_option("--gc", al_gc, "input clearsky.csv");
    align_cmd->add_option("--map", al_map, "input clearsky_map.csv");
    align_cmd->add_option("--cot", al_cot, "input cot_mean.csv");
    align_cmd->add_option("--out", al_out, "output aligned_pairs.csv");
    align_cmd->add_option("--window", align_overrides.window_min, "window length in minutes");
    align_cmd->add_option("--anchor", align_overrides.anchor, "centered|trailing|leading");
    align_cmd->add_option("--min-samples", align_overrides.min_samples,
                          "minimum camera samples per window");
    align_cmd->add_option("--normalization", align_overrides.normalization, "signed|absolute");

    // correlate
    auto* correlate = app.add_subcommand("correlate", "correlation, best-fit line, scatter plot");
    std::string co_pairs = "aligned_pairs.csv", co_report = "report.json",
                co_svg = "scatter.svg", co_points = "scatter_points.csv";
    correlate->add_option("--pairs", co_pairs, "input aligned_pairs.csv");
    correlate->add_option("--out-report", co_report, "output report.json");
    correlate->add_option("--out-svg", co_svg, "output scatter.svg");
    correlate->add_option("--out-points", co_points, "output scatter_points.csv");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset with ground truth");
    std::string synth_out;
    std::optional<std::uint64_t> seed_override;
    synth_cmd->add_option("--out", synth_out, "output directory")->required();
    synth_cmd->add_option("--seed", seed_override, "seed override");

    // run-all
    auto* run_all = app.add_subcommand("run-all", "full chain: luminance through correlate");
    std::string ra_images, ra_cot, ra_flags, ra_out = ".", ra_sidecar;
    int ra_jobs = 0;
    bool ra_no_intercept = false;
    double ra_exif_offset = 0.0;
    AlignOverrides ra_overrides;
    run_all->add_option("--images", ra_images, "directory of PNG/JPEG frames")->required();
    run_all->add_option("--cot", ra_cot, "input COT grid CSV")->required();
    run_all->add_option("--flags", ra_flags, "clear-sky labels CSV")->required();
    run_all->add_option("--out", ra_out, "output directory");
    run_all->add_option("--sidecar", ra_sidecar, "exif.csv sidecar");
    run_all->add_option("--jobs", ra_jobs, "worker threads for the luminance stage");
    run_all->add_option("--exif-utc-offset", ra_exif_offset,
                        "UTC offset in hours of embedded EXIF timestamps");
    run_all->add_flag("--no-intercept", ra_no_intercept, "force the map fit through the origin");
    run_all->add_option("--window", ra_overrides.window_min, "window length in minutes");
    run_all->add_option("--anchor", ra_overrides.anchor, "centered|trailing|leading");
    run_all->add_option("--min-samples", ra_overrides.min_samples,
                        "minimum camera samples per window");
    run_all->add_option("--normalization", ra_overrides.normalization, "signed|absolute");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors land on stderr and exit 1; --help stays 0
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        PipelineConfig cfg = resolve_config(config_path);

        if (solarpos->parsed()) {
            GeoLocation site = cfg.site;
            if (*lat_opt || *lon_opt)
                site = GeoLocation(*lat_opt ? opt_lat : cfg.site.latitude_deg,
                                   *lon_opt ? opt_lon : cfg.site.longitude_deg,
                                   cfg.site.altitude_m);
            const auto local = UtcInstant::parse_iso8601(at_text);
            const auto t = local.plus_seconds(-static_cast<std::int64_t>(utc_offset * 3600.0));
            const SolarPosition sun = solar_position(t, site);
            std::printf("timestamp_utc,zenith_deg,azimuth_deg,elevation_deg\n%s,%s,%s,%s\n",
                        t.to_iso8601().c_str(), csv::format_number(sun.zenith_deg).c_str(),
                        csv::format_number(sun.azimuth_deg).c_str(),
                        csv::format_number(sun.elevation_deg()).c_str());
        } else if (luminance->parsed()) {
            if (radius_override) {
                if (!(*radius_override > 0.0))
                    throw ValidationError("--radius must be positive");
                cfg.circumsolar_radius_px = *radius_override;
            }
            std::optional<std::filesystem::path> sidecar;
            if (!sidecar_arg.empty())
                sidecar = sidecar_arg;
            const auto res = stage_luminance(cfg, images_dir, sidecar, lum_out, jobs, exif_offset);
            log_info(std::to_string(res.frames) + " samples written, " +
                     std::to_string(res.night_skipped) + " night frames skipped");
        } else if (clearsky->parsed()) {
            stage_clearsky(cfg, cs_lum, cs_out);
        } else if (fit_map->parsed()) {
            const LinearMap map = stage_fit_map(cfg, fm_lum, fm_gc, fm_flags, fm_out, !no_intercept);
            log_info("map: slope " + csv::format_number(map.slope) + ", intercept " +
                     csv::format_number(map.intercept) + ", r2 " + csv::format_number(map.fit_r2) +
                     ", n " + std::to_string(map.n));
        } else if (cot_cmd->parsed()) {
            if (min_valid_cells)
                cfg.min_valid_cot_cells = *min_valid_cells;
            if (cfg.min_valid_cot_cells < 1 || cfg.min_valid_cot_cells > 9)
                throw ValidationError("--min-valid-cells must be in [1, 9]");
            const auto n = stage_cot(cfg, cot_in, cot_out, log_warn);
            log_info(std::to_string(n) + " COT means written");
        } else if (align_cmd->parsed()) {
            align_overrides.apply(cfg);
            const auto n = stage_align(cfg, al_lum, al_gc, al_map, al_cot, al_out);
            log_info(std::to_string(n) + " aligned pairs written");
        } else if (correlate->parsed()) {
            const RegressionResult fit = stage_correlate(co_pairs, co_report, co_svg, co_points);
            log_info("slope " + csv::format_number(fit.slope) + ", r " + csv::format_number(fit.r) +
                     ", n " + std::to_string(fit.n));
        } else if (synth_cmd->parsed()) {
            if (seed_override)
                cfg.synth.seed = *seed_override;
            const SynthSummary s = synth_dataset(cfg, synth_out);
            log_info(std::to_string(s.frames) + " frames over " + std::to_string(s.overpasses) +
                     " overpasses");
        } else if (run_all->parsed()) {
            ra_overrides.apply(cfg);
            const std::filesystem::path out(ra_out);
            std::error_code ec;
            std::filesystem::create_directories(out, ec);
            if (ec)
                throw IoError("cannot create " + out.string());
            std::optional<std::filesystem::path> sidecar;
            if (!ra_sidecar.empty())
                sidecar = ra_sidecar;

            const auto lum = stage_luminance(cfg, ra_images, sidecar, out / "luminance.csv",
                                             ra_jobs, ra_exif_offset);
            log_info("luminance: " + std::to_string(lum.frames) + " samples");
            stage_clearsky(cfg, out / "luminance.csv", out / "clearsky.csv");
            const LinearMap map =
                stage_fit_map(cfg, out / "luminance.csv", out / "clearsky.csv", ra_flags,
                              out / "clearsky_map.csv", !ra_no_intercept);
            log_info("map r2: " + csv::format_number(map.fit_r2));
            stage_cot(cfg, ra_cot, out / "cot_mean.csv", log_warn);
            const auto n_pairs = stage_align(cfg, out / "luminance.csv", out / "clearsky.csv",
                                             out / "clearsky_map.csv", out / "cot_mean.csv",
                                             out / "aligned_pairs.csv");
            log_info("aligned pairs: " + std::to_string(n_pairs));
            const RegressionResult fit =
                stage_correlate(out / "aligned_pairs.csv", out / "report.json",
                                out / "scatter.svg", out / "scatter_points.csv");
            log_info("slope " + csv::format_number(fit.slope) + ", r " + csv::format_number(fit.r));
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "heliocot: I/O error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "heliocot: error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "heliocot: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
