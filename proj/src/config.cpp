#include "heliocot/config.hpp"

#include <charconv>
#include <map>
#include <variant>

#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"
#include "heliocot/io_util.hpp"

namespace heliocot {

namespace {

using TomlValue = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;
using TomlTable = std::map<std::string, TomlValue, std::less<>>;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Drops a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"')
            in_string = !in_string;
        else if (s[i] == '#' && !in_string)
            return s.substr(0, i);
    }
    return s;
}

TomlValue parse_scalar(std::string_view text, long line) {
    if (text == "true") return true;
    if (text == "false") return false;
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"')
        return std::string(text.substr(1, text.size() - 2));
    double num = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), num);
    if (res.ec == std::errc{} && res.ptr == text.data() + text.size())
        return num;
    throw ParseError("bad config value '" + std::string(text) + "'", line);
}

TomlValue parse_value(std::string_view text, long line) {
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']')
            throw ParseError("unterminated array", line);
        std::string_view body = trim(text.substr(1, text.size() - 2));
        std::vector<double> nums;
        std::vector<std::string> strs;
        if (!body.empty()) {
            for (auto item : csv::split_fields(body)) {
                const auto scalar = parse_scalar(trim(item), line);
                if (std::holds_alternative<double>(scalar))
                    nums.push_back(std::get<double>(scalar));
                else if (std::holds_alternative<std::string>(scalar))
                    strs.push_back(std::get<std::string>(scalar));
                else
                    throw ParseError("arrays may hold numbers or strings only", line);
            }
        }
        if (!nums.empty() && !strs.empty())
            throw ParseError("mixed array element types", line);
        if (!strs.empty())
            return strs;
        return nums;
    }
    return parse_scalar(text, line);
}

std::map<std::string, TomlTable, std::less<>> parse_toml_subset(const std::string& text) {
    std::map<std::string, TomlTable, std::less<>> tables;
    std::string section;
    long line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view raw = nl == std::string::npos
                                   ? std::string_view(text).substr(start)
                                   : std::string_view(text).substr(start, nl - start);
        start = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto linev = trim(strip_comment(raw));
        if (linev.empty())
            continue;
        if (linev.front() == '[' && linev.back() == ']' && linev.find('=') == std::string_view::npos) {
            section = std::string(trim(linev.substr(1, linev.size() - 2)));
            if (section.empty())
                throw ParseError("empty table name", line_no);
            tables.try_emplace(section);
            continue;
        }
        const auto eq = linev.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no);
        const auto key = trim(linev.substr(0, eq));
        const auto value = trim(linev.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("expected 'key = value'", line_no);
        if (section.empty())
            throw ParseError("key outside any [table]", line_no);
        if (!tables[section].emplace(std::string(key), parse_value(value, line_no)).second)
            throw ParseError("duplicate key '" + std::string(key) + "'", line_no);
    }
    return tables;
}

// Pulls typed values out of a table, erasing consumed keys so leftovers can
// be rejected afterwards.
struct TableReader {
    TomlTable& table;
    const std::string& name;

    template <typename T>
    void get(const char* key, T& out) {
        const auto it = table.find(key);
        if (it == table.end())
            return;
        if (auto* v = std::get_if<T>(&it->second)) {
            out = *v;
        } else if constexpr (std::is_same_v<T, double>) {
            throw ValidationError("config [" + name + "] " + key + ": expected a number");
        } else if constexpr (std::is_same_v<T, bool>) {
            throw ValidationError("config [" + name + "] " + key + ": expected true/false");
        } else {
            throw ValidationError("config [" + name + "] " + key + ": wrong type");
        }
        table.erase(it);
    }

    void get(const char* key, int& out) {
        double v = static_cast<double>(out);
        get(key, v);
        if (v != static_cast<double>(static_cast<int>(v)))
            throw ValidationError("config [" + name + "] " + key + ": expected an integer");
        out = static_cast<int>(v);
    }

    void get(const char* key, std::uint64_t& out) {
        double v = static_cast<double>(out);
        get(key, v);
        if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v)))
            throw ValidationError("config [" + name + "] " + key + ": expected a non-negative integer");
        out = static_cast<std::uint64_t>(v);
    }

    void finish() {
        if (!table.empty())
            throw ValidationError("config [" + name + "]: unknown key '" + table.begin()->first + "'");
    }
};

} // namespace

PipelineConfig default_config() { return PipelineConfig{}; }

PipelineConfig parse_config(const std::string& text) {
    auto tables = parse_toml_subset(text);
    PipelineConfig cfg;

    double site_lat = cfg.site.latitude_deg, site_lon = cfg.site.longitude_deg,
           site_alt = cfg.site.altitude_m;
    int cam_w = cfg.camera.image_width_px, cam_h = cfg.camera.image_height_px;
    double cam_cx = cfg.camera.center_x_px, cam_cy = cfg.camera.center_y_px;
    double cam_r90 = cfg.camera.radius_90deg_px, cam_az = cfg.camera.azimuth_offset_deg;
    bool cam_mirror = cfg.camera.mirrored;
    double cs_a = cfg.clear_sky.transmittance_scale, cs_b = cfg.clear_sky.zenith_cosine_exponent,
           cs_c = cfg.clear_sky.elevation_decay_per_deg, cs_e0 = cfg.clear_sky.solar_constant_wm2;
    double radius_px = -1.0;  // sentinel: derive from the camera
    std::string anchor = "centered", normalization = "signed";

    for (auto& [section, table] : tables) {
        TableReader reader{table, section};
        if (section == "site") {
            reader.get("latitude_deg", site_lat);
            reader.get("longitude_deg", site_lon);
            reader.get("altitude_m", site_alt);
        } else if (section == "camera") {
            reader.get("image_width_px", cam_w);
            reader.get("image_height_px", cam_h);
            reader.get("center_x_px", cam_cx);
            reader.get("center_y_px", cam_cy);
            reader.get("radius_90deg_px", cam_r90);
            reader.get("azimuth_offset_deg", cam_az);
            reader.get("mirror", cam_mirror);
        } else if (section == "clear_sky") {
            reader.get("a", cs_a);
            reader.get("b", cs_b);
            reader.get("c", cs_c);
            reader.get("e0_wm2", cs_e0);
        } else if (section == "extraction") {
            reader.get("circumsolar_radius_px", radius_px);
            reader.get("mask_saturated", cfg.mask_saturated);
        } else if (section == "pipeline") {
            reader.get("window_min", cfg.window_min);
            reader.get("window_anchor", anchor);
            reader.get("min_samples", cfg.min_samples);
            reader.get("normalization", normalization);
            reader.get("min_valid_cot_cells", cfg.min_valid_cot_cells);
        } else if (section == "synth") {
            SynthParams& sp = cfg.synth;
            reader.get("seed", sp.seed);
            reader.get("start_date", sp.start_date);
            reader.get("days", sp.days);
            reader.get("overpass_utc", sp.overpass_utc);
            reader.get("span_min", sp.span_min);
            reader.get("cadence_min", sp.cadence_min);
            reader.get("cot_cycle", sp.cot_cycle);
            reader.get("map_slope", sp.map_slope);
            reader.get("map_intercept", sp.map_intercept);
            reader.get("planted_slope", sp.planted_slope);
            reader.get("background_gray", sp.background_gray);
            reader.get("disk_scale", sp.disk_scale);
            reader.get("exposure_s", sp.exposure_s);
            reader.get("iso", sp.iso);
            reader.get("f_number", sp.f_number);
            reader.get("exposure_alt_factor", sp.exposure_alt_factor);
            reader.get("noise_sigma", sp.noise_sigma);
        } else {
            throw ValidationError("config: unknown table [" + section + "]");
        }
        reader.finish();
    }

    cfg.site = GeoLocation(site_lat, site_lon, site_alt);
    cfg.camera = CameraModel(cam_w, cam_h, cam_cx, cam_cy, cam_r90, cam_az, cam_mirror);
    cfg.clear_sky = ClearSkyParams(cs_a, cs_b, cs_c, cs_e0);
    cfg.circumsolar_radius_px = radius_px > 0.0 ? radius_px : 0.1 * cfg.camera.radius_90deg_px;

    if (anchor == "centered")
        cfg.window_anchor = WindowAnchor::centered;
    else if (anchor == "trailing")
        cfg.window_anchor = WindowAnchor::trailing;
    else if (anchor == "leading")
        cfg.window_anchor = WindowAnchor::leading;
    else
        throw ValidationError("config: window_anchor must be centered|trailing|leading");

    if (normalization == "signed")
        cfg.normalization = NormalizationMode::signed_diff;
    else if (normalization == "absolute")
        cfg.normalization = NormalizationMode::absolute_diff;
    else
        throw ValidationError("config: normalization must be signed|absolute");

    if (!(cfg.window_min > 0.0))
        throw ValidationError("config: window_min must be positive");
    if (cfg.min_samples < 1)
        throw ValidationError("config: min_samples must be >= 1");
    if (cfg.min_valid_cot_cells < 1 || cfg.min_valid_cot_cells > 9)
        throw ValidationError("config: min_valid_cot_cells must be in [1, 9]");

    const SynthParams& sp = cfg.synth;
    if (sp.days < 1)
        throw ValidationError("config: synth days must be >= 1");
    if (sp.overpass_utc.empty())
        throw ValidationError("config: synth needs at least one overpass time");
    if (!(sp.cadence_min > 0.0) || sp.span_min < 0.0)
        throw ValidationError("config: synth cadence/span invalid");
    if (sp.cot_cycle.empty())
        throw ValidationError("config: synth cot_cycle must not be empty");
    for (double c : sp.cot_cycle)
        if (c < kCotMin || c > kCotMax)
            throw ValidationError("config: synth cot_cycle value out of [0, 100]");
    if (sp.background_gray < 0 || sp.background_gray > 255)
        throw ValidationError("config: synth background_gray out of [0, 255]");
    if (!(sp.disk_scale >= 1.0))
        throw ValidationError("config: synth disk_scale must be >= 1");
    if (!(sp.exposure_s > 0.0) || !(sp.iso > 0.0) || !(sp.f_number > 0.0) ||
        !(sp.exposure_alt_factor > 0.0))
        throw ValidationError("config: synth exposure parameters must be positive");
    if (sp.noise_sigma < 0.0)
        throw ValidationError("config: synth noise_sigma must be >= 0");

    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_file(path));
}

} // namespace heliocot
