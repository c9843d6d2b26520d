#include "heliocot/stages.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"
#include "heliocot/image_io.hpp"
#include "heliocot/io_util.hpp"

namespace heliocot {

namespace {

constexpr std::string_view kGcHeader = "timestamp_utc,g_c_wm2";
constexpr std::string_view kMapHeader = "m,q,r2,n";
constexpr std::string_view kFlagsHeader = "timestamp_utc,is_clear";

std::map<std::int64_t, double> gc_by_time(const std::vector<GcRow>& rows) {
    std::map<std::int64_t, double> out;
    for (const auto& row : rows)
        out[row.timestamp.epoch_seconds()] = row.g_c_wm2;
    return out;
}

} // namespace

std::string serialize_gc_csv(std::span<const GcRow> rows) {
    std::string out{kGcHeader};
    out += '\n';
    for (const auto& row : rows) {
        out += row.timestamp.to_iso8601();
        out += ',';
        out += csv::format_number(row.g_c_wm2);
        out += '\n';
    }
    return out;
}

std::vector<GcRow> parse_gc_csv(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw ParseError("empty clearsky CSV");
    csv::expect_header(lines[0], kGcHeader);
    std::vector<GcRow> out;
    out.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        const auto fields = csv::split_fields(lines[i]);
        if (fields.size() != 2)
            throw ParseError("expected 2 fields", line_no);
        GcRow row;
        try {
            row.timestamp = UtcInstant::parse_iso8601(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        row.g_c_wm2 = csv::parse_number(fields[1], line_no);
        out.push_back(row);
    }
    return out;
}

std::string serialize_linear_map_csv(const LinearMap& map) {
    std::string out{kMapHeader};
    out += '\n';
    out += csv::format_number(map.slope);
    out += ',';
    out += csv::format_number(map.intercept);
    out += ',';
    out += csv::format_number(map.fit_r2);
    out += ',';
    out += std::to_string(map.n);
    out += '\n';
    return out;
}

LinearMap parse_linear_map_csv(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.size() != 2)
        throw ParseError("clearsky_map CSV must hold exactly one data row");
    csv::expect_header(lines[0], kMapHeader);
    const auto fields = csv::split_fields(lines[1]);
    if (fields.size() != 4)
        throw ParseError("expected 4 fields", 2);
    LinearMap map;
    map.slope = csv::parse_number(fields[0], 2);
    map.intercept = csv::parse_number(fields[1], 2);
    map.fit_r2 = csv::parse_number(fields[2], 2);
    map.n = csv::parse_integer(fields[3], 2);
    return map;
}

std::vector<ClearFlagRow> parse_clear_flags(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw ParseError("empty clear-flags CSV");
    csv::expect_header(lines[0], kFlagsHeader);
    std::vector<ClearFlagRow> out;
    out.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        const auto fields = csv::split_fields(lines[i]);
        if (fields.size() != 2)
            throw ParseError("expected 2 fields", line_no);
        ClearFlagRow row;
        try {
            row.timestamp = UtcInstant::parse_iso8601(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (fields[1] == "1")
            row.is_clear = true;
        else if (fields[1] == "0")
            row.is_clear = false;
        else
            throw ParseError("is_clear must be 0 or 1", line_no);
        out.push_back(row);
    }
    return out;
}

LuminanceStageResult stage_luminance(const PipelineConfig& cfg,
                                     const std::filesystem::path& images_dir,
                                     const std::optional<std::filesystem::path>& sidecar_path,
                                     const std::filesystem::path& out_path, int jobs,
                                     double exif_utc_offset_hours) {
    const auto files = list_image_files(images_dir);
    if (files.empty())
        throw ValidationError("no images in " + images_dir.string());

    std::map<std::string, ExposureMeta> sidecar;
    if (sidecar_path) {
        for (auto& row : parse_exif_sidecar(read_file(*sidecar_path)))
            sidecar[row.filename] = row.meta;
    } else {
        // conventional location next to the images
        const auto conventional = images_dir / "exif.csv";
        if (std::filesystem::exists(conventional))
            for (auto& row : parse_exif_sidecar(read_file(conventional)))
                sidecar[row.filename] = row.meta;
    }
    const auto* sidecar_ptr = sidecar.empty() ? nullptr : &sidecar;

    if (jobs < 1)
        jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min<int>(jobs, static_cast<int>(files.size()));

    std::vector<std::optional<LuminanceSample>> results(files.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size())
                return;
            try {
                const SkyImage img = load_sky_image(files[i], sidecar_ptr, exif_utc_offset_hours);
                results[i] = extract_sample(img, cfg.site, cfg.camera, cfg.circumsolar_radius_px,
                                            cfg.mask_saturated);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(files.size());
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);

    std::vector<LuminanceSample> samples;
    samples.reserve(files.size());
    LuminanceStageResult res;
    for (auto& r : results) {
        if (r)
            samples.push_back(*r);
        else
            ++res.night_skipped;
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    res.frames = samples.size();
    atomic_write_file(out_path, serialize_luminance_csv(samples));
    return res;
}

void stage_clearsky(const PipelineConfig& cfg, const std::filesystem::path& luminance_path,
                    const std::filesystem::path& out_path) {
    const auto samples = parse_luminance_csv(read_file(luminance_path));
    std::vector<GcRow> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) {
        const SolarPosition sun = solar_position(s.timestamp, cfg.site);
        rows.push_back(GcRow{s.timestamp,
                             clear_sky_irradiance(sun, cfg.clear_sky,
                                                  s.timestamp.day_of_year_fractional())});
    }
    atomic_write_file(out_path, serialize_gc_csv(rows));
}

LinearMap stage_fit_map(const std::filesystem::path& luminance_path,
                        const std::filesystem::path& gc_path,
                        const std::filesystem::path& flags_path,
                        const std::filesystem::path& out_path, bool with_intercept) {
    const auto samples = parse_luminance_csv(read_file(luminance_path));
    const auto gc = gc_by_time(parse_gc_csv(read_file(gc_path)));
    std::map<std::int64_t, bool> clear;
    for (const auto& row : parse_clear_flags(read_file(flags_path)))
        clear[row.timestamp.epoch_seconds()] = row.is_clear;

    std::vector<std::pair<double, double>> pairs;
    for (const auto& s : samples) {
        const auto flag = clear.find(s.timestamp.epoch_seconds());
        if (flag == clear.end() || !flag->second)
            continue;
        const auto g = gc.find(s.timestamp.epoch_seconds());
        if (g == gc.end())
            throw ValidationError("no clear-sky irradiance for " + s.timestamp.to_iso8601());
        pairs.emplace_back(g->second, s.l_norm);
    }
    if (pairs.size() < 2)
        throw ValidationError("need at least 2 clear-labeled frames to fit the map, got " +
                              std::to_string(pairs.size()));
    const LinearMap map = fit_linear_map(pairs, with_intercept);
    atomic_write_file(out_path, serialize_linear_map_csv(map));
    return map;
}

std::size_t stage_cot(const PipelineConfig& cfg, const std::filesystem::path& in_path,
                      const std::filesystem::path& out_path, const WarnFn& warn) {
    const auto grids = parse_cot_csv(read_file(in_path));
    const auto means = reduce_cot(grids, cfg.min_valid_cot_cells, warn);
    atomic_write_file(out_path, serialize_cot_means(means));
    return means.size();
}

std::size_t stage_align(const PipelineConfig& cfg, const std::filesystem::path& luminance_path,
                        const std::filesystem::path& gc_path,
                        const std::filesystem::path& map_path,
                        const std::filesystem::path& cot_mean_path,
                        const std::filesystem::path& out_path) {
    const auto samples = parse_luminance_csv(read_file(luminance_path));
    const auto gc = gc_by_time(parse_gc_csv(read_file(gc_path)));
    const LinearMap map = parse_linear_map_csv(read_file(map_path));
    const auto cot_means = parse_cot_means(read_file(cot_mean_path));

    std::vector<std::pair<UtcInstant, double>> diffs;
    diffs.reserve(samples.size());
    for (const auto& s : samples) {
        const auto g = gc.find(s.timestamp.epoch_seconds());
        if (g == gc.end())
            throw ValidationError("no clear-sky irradiance for " + s.timestamp.to_iso8601());
        const double l_clear = clear_sky_luminance(g->second, map);
        diffs.emplace_back(s.timestamp, luminance_difference(s.l_norm, l_clear));
    }

    auto pairs = align(diffs, cot_means, cfg.window_min, cfg.min_samples, cfg.window_anchor);
    if (pairs.size() == 1)
        throw ValidationError("only 1 aligned pair; normalization needs at least 2");
    if (!pairs.empty())
        normalize_pairs(pairs, cfg.normalization);
    atomic_write_file(out_path, serialize_aligned_pairs(pairs));
    return pairs.size();
}

RegressionResult stage_correlate(const std::filesystem::path& pairs_path,
                                 const std::filesystem::path& report_path,
                                 const std::filesystem::path& svg_path,
                                 const std::filesystem::path& points_path) {
    const auto pairs = parse_aligned_pairs(read_file(pairs_path));
    if (pairs.size() < 3)
        throw ValidationError("correlation needs at least 3 aligned pairs, got " +
                              std::to_string(pairs.size()));
    std::vector<double> xs, ys;
    xs.reserve(pairs.size());
    ys.reserve(pairs.size());
    for (const auto& p : pairs) {
        xs.push_back(p.cot_norm);
        ys.push_back(p.lum_norm);
    }

    const double r = pearson(xs, ys);
    const double rho = spearman(xs, ys);
    const RegressionResult fit = fit_line(xs, ys);
    const auto outliers = flag_outliers(xs, ys, fit);

    nlohmann::json report;
    report["pearson_r"] = r;
    report["spearman_r"] = rho;
    report["slope"] = fit.slope;
    report["intercept"] = fit.intercept;
    report["r2"] = fit.r2;
    report["n"] = fit.n;
    report["outlier_indices"] = outliers;
    atomic_write_file(report_path, report.dump(2) + "\n");

    emit_scatter(pairs, &fit, svg_path, points_path, outliers);
    return fit;
}

} // namespace heliocot
