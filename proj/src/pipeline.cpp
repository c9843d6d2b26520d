#include "heliocot/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heliocot/csv.hpp"
#include "heliocot/errors.hpp"

namespace heliocot {

namespace {

constexpr std::string_view kPairsHeader =
    "timestamp_utc,cot_mean,lum_diff_mean,n_samples,cot_norm,lum_norm";

} // namespace

double luminance_difference(double l_actual, double l_clear) {
    return l_actual - l_clear;
}

std::vector<AlignedPair> align(std::span<const std::pair<UtcInstant, double>> diff_series,
                               std::span<const CotMean> cot_series, double window_min,
                               int min_samples, WindowAnchor anchor) {
    if (!(window_min > 0.0))
        throw ValidationError("window length must be positive");
    if (min_samples < 1)
        throw ValidationError("min_samples must be >= 1");
    for (std::size_t i = 1; i < diff_series.size(); ++i)
        if (diff_series[i].first < diff_series[i - 1].first)
            throw ValidationError("luminance-difference series not sorted by timestamp");
    for (std::size_t i = 1; i < cot_series.size(); ++i)
        if (cot_series[i].timestamp < cot_series[i - 1].timestamp)
            throw ValidationError("COT series not sorted by timestamp");

    const double window_s = window_min * 60.0;
    std::vector<AlignedPair> out;
    out.reserve(cot_series.size());
    for (const auto& cot : cot_series) {
        double lo_s = 0.0, hi_s = 0.0;
        switch (anchor) {
        case WindowAnchor::centered:
            lo_s = -window_s / 2.0;
            hi_s = window_s / 2.0;
            break;
        case WindowAnchor::trailing:
            lo_s = -window_s;
            hi_s = 0.0;
            break;
        case WindowAnchor::leading:
            lo_s = 0.0;
            hi_s = window_s;
            break;
        }
        const double t0 = static_cast<double>(cot.timestamp.epoch_seconds());

        // Closed window on both ends.
        const auto first = std::lower_bound(
            diff_series.begin(), diff_series.end(), t0 + lo_s,
            [](const auto& s, double t) { return static_cast<double>(s.first.epoch_seconds()) < t; });
        const auto last = std::upper_bound(
            diff_series.begin(), diff_series.end(), t0 + hi_s,
            [](double t, const auto& s) { return t < static_cast<double>(s.first.epoch_seconds()); });

        // Equal-timestamp samples may arrive in any relative order; fix the
        // summation order so the emitted mean is deterministic.
        std::vector<std::pair<UtcInstant, double>> window(first, last);
        std::sort(window.begin(), window.end());

        if (static_cast<int>(window.size()) < min_samples)
            continue;
        double sum = 0.0;
        for (const auto& [t, v] : window)
            sum += v;
        out.push_back(AlignedPair{cot.timestamp, cot.mean, sum / static_cast<double>(window.size()),
                                  static_cast<int>(window.size()),
                                  std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN()});
    }
    return out;
}

std::vector<double> minmax_normalize(std::span<const double> xs) {
    if (xs.size() < 2)
        throw ValidationError("min-max normalization needs at least 2 values");
    const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo))
        throw ValidationError("degenerate range: all values equal");
    std::vector<double> out;
    out.reserve(xs.size());
    for (const double x : xs)
        out.push_back((x - lo) / (hi - lo));
    return out;
}

void normalize_pairs(std::vector<AlignedPair>& pairs, NormalizationMode mode) {
    std::vector<double> cot, lum;
    cot.reserve(pairs.size());
    lum.reserve(pairs.size());
    for (const auto& p : pairs) {
        cot.push_back(p.cot_mean);
        lum.push_back(mode == NormalizationMode::absolute_diff ? std::fabs(p.lum_diff_mean)
                                                               : p.lum_diff_mean);
    }
    const auto cot_n = minmax_normalize(cot);
    const auto lum_n = minmax_normalize(lum);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        pairs[i].cot_norm = cot_n[i];
        pairs[i].lum_norm = lum_n[i];
    }
}

std::string serialize_aligned_pairs(std::span<const AlignedPair> pairs) {
    std::string out{kPairsHeader};
    out += '\n';
    for (const auto& p : pairs) {
        out += p.timestamp.to_iso8601();
        out += ',';
        out += csv::format_number(p.cot_mean);
        out += ',';
        out += csv::format_number(p.lum_diff_mean);
        out += ',';
        out += std::to_string(p.n_samples);
        out += ',';
        out += csv::format_number(p.cot_norm);
        out += ',';
        out += csv::format_number(p.lum_norm);
        out += '\n';
    }
    return out;
}

std::vector<AlignedPair> parse_aligned_pairs(const std::string& text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw ParseError("empty aligned-pairs CSV");
    csv::expect_header(lines[0], kPairsHeader);

    std::vector<AlignedPair> out;
    out.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        const auto fields = csv::split_fields(lines[i]);
        if (fields.size() != 6)
            throw ParseError("expected 6 fields", line_no);
        AlignedPair p;
        try {
            p.timestamp = UtcInstant::parse_iso8601(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        p.cot_mean = csv::parse_number(fields[1], line_no);
        p.lum_diff_mean = csv::parse_number(fields[2], line_no);
        p.n_samples = static_cast<int>(csv::parse_integer(fields[3], line_no));
        p.cot_norm = csv::parse_number(fields[4], line_no);
        p.lum_norm = csv::parse_number(fields[5], line_no);
        out.push_back(p);
    }
    return out;
}

} // namespace heliocot
