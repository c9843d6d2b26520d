#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heliocot/config.hpp"
#include "heliocot/stats.hpp"

namespace heliocot {

// File-to-file pipeline stages. Each writes its outputs atomically and is a
// pure function of its inputs, so `run-all` and the individual subcommands
// produce byte-identical artifacts.

using WarnFn = std::function<void(const std::string&)>;

struct LuminanceStageResult {
    std::size_t frames = 0;
    std::size_t night_skipped = 0;
};

// images + optional exif.csv sidecar -> luminance.csv
LuminanceStageResult stage_luminance(const PipelineConfig& cfg,
                                     const std::filesystem::path& images_dir,
                                     const std::optional<std::filesystem::path>& sidecar_path,
                                     const std::filesystem::path& out_path, int jobs,
                                     double exif_utc_offset_hours = 0.0);

// luminance.csv -> clearsky.csv (modeled irradiance at each frame timestamp;
// header `timestamp_utc,g_c_wm2`)
void stage_clearsky(const PipelineConfig& cfg, const std::filesystem::path& luminance_path,
                    const std::filesystem::path& out_path);

// luminance.csv + clearsky.csv + clear_flags.csv -> clearsky_map.csv
// (header `m,q,r2,n`, one row)
LinearMap stage_fit_map(const PipelineConfig& cfg, const std::filesystem::path& luminance_path,
                        const std::filesystem::path& gc_path,
                        const std::filesystem::path& flags_path,
                        const std::filesystem::path& out_path, bool with_intercept = true);

// cot.csv -> cot_mean.csv (all-fill grids dropped through warn)
std::size_t stage_cot(const PipelineConfig& cfg, const std::filesystem::path& in_path,
                      const std::filesystem::path& out_path, const WarnFn& warn = {});

// luminance.csv + clearsky.csv + clearsky_map.csv + cot_mean.csv
//   -> aligned_pairs.csv
std::size_t stage_align(const PipelineConfig& cfg, const std::filesystem::path& luminance_path,
                        const std::filesystem::path& gc_path,
                        const std::filesystem::path& map_path,
                        const std::filesystem::path& cot_mean_path,
                        const std::filesystem::path& out_path);

// aligned_pairs.csv -> report.json + scatter.svg + scatter_points.csv
RegressionResult stage_correlate(const std::filesystem::path& pairs_path,
                                 const std::filesystem::path& report_path,
                                 const std::filesystem::path& svg_path,
                                 const std::filesystem::path& points_path);

// clearsky.csv and clearsky_map.csv codecs (shared with tests).
struct GcRow {
    UtcInstant timestamp;
    double g_c_wm2 = 0.0;
};
std::string serialize_gc_csv(std::span<const GcRow> rows);
std::vector<GcRow> parse_gc_csv(const std::string& text);
std::string serialize_linear_map_csv(const LinearMap& map);
LinearMap parse_linear_map_csv(const std::string& text);

struct ClearFlagRow {
    UtcInstant timestamp;
    bool is_clear = false;
};
std::vector<ClearFlagRow> parse_clear_flags(const std::string& text);

} // namespace heliocot
