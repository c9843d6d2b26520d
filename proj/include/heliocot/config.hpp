#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "heliocot/clearsky.hpp"
#include "heliocot/geometry.hpp"
#include "heliocot/pipeline.hpp"

namespace heliocot {

// Synthetic-dataset generation knobs ([synth] table). The planted relation:
// each overpass window gets a scheduled COT c; every frame in the window is
// rendered so its circumsolar luminance equals the clear-sky baseline
// (map_slope * g_c + map_intercept) plus planted_slope * (c / 100).
struct SynthParams {
    std::uint64_t seed = 42;
    std::string start_date = "2015-03-01";  // first day, UTC
    int days = 30;
    std::vector<std::string> overpass_utc = {"04:00", "07:00"};
    double span_min = 20.0;     // frames span overpass +/- span_min
    double cadence_min = 2.0;   // frame cadence
    std::vector<double> cot_cycle = {0,  5,  10, 15, 20, 25, 30, 35, 40, 45, 50,
                                     55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
    double map_slope = 12.5;        // true luminance per W/m^2
    double map_intercept = 11500.0; // true luminance offset
    double planted_slope = -14000.0;  // luminance units per unit normalized COT
    int background_gray = 40;
    double disk_scale = 1.5;  // rendered disk radius / extraction radius
    double exposure_s = 0.002;
    double iso = 100.0;
    double f_number = 8.0;
    double exposure_alt_factor = 0.8;  // exposure multiplier on odd frames
    double noise_sigma = 0.0;          // Gaussian pixel noise, 8-bit units
};

// Every under-specified constant of the workflow, collected in one file.
struct PipelineConfig {
    GeoLocation site{1.3483, 103.6831, 79.0};
    CameraModel camera{1024, 1024, 511.5, 511.5, 460.0};
    ClearSkyParams clear_sky{};
    double circumsolar_radius_px = 46.0;  // default 0.1 * radius_90deg_px
    bool mask_saturated = false;
    double window_min = 15.0;
    WindowAnchor window_anchor = WindowAnchor::centered;
    int min_samples = 3;
    NormalizationMode normalization = NormalizationMode::signed_diff;
    int min_valid_cot_cells = 1;
    SynthParams synth{};
};

PipelineConfig default_config();

// Strict TOML-subset reader: [tables], key = value with numbers, booleans,
// quoted strings and one-line arrays, # comments. Unknown tables or keys are
// rejected. Missing file throws IoError (exit code 2 at the CLI).
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& text);

} // namespace heliocot
