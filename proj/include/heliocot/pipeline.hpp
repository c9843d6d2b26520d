#pragma once

#include <span>
#include <utility>
#include <vector>

#include "heliocot/cot.hpp"
#include "heliocot/time.hpp"

namespace heliocot {

// One scatter point: a satellite observation paired with the windowed mean
// luminance difference from the camera series. The *_norm fields are NaN
// until normalize_pairs runs.
struct AlignedPair {
    UtcInstant timestamp;  // the satellite observation time
    double cot_mean = 0.0;
    double lum_diff_mean = 0.0;  // signed
    int n_samples = 0;
    double cot_norm = 0.0;
    double lum_norm = 0.0;
};

// Signed difference; clouds can dim or brighten the circumsolar region.
double luminance_difference(double l_actual, double l_clear);

enum class WindowAnchor { centered, trailing, leading };

// For each satellite timestamp T, averages the luminance-difference samples
// whose timestamps fall in the closed window around T (centered: +/- half the
// window; trailing: [T-w, T]; leading: [T, T+w]). Emits a pair only when the
// window holds at least min_samples samples. Both inputs must be sorted.
std::vector<AlignedPair> align(std::span<const std::pair<UtcInstant, double>> diff_series,
                               std::span<const CotMean> cot_series, double window_min,
                               int min_samples, WindowAnchor anchor = WindowAnchor::centered);

// Min-max rescaling onto [0, 1]. Needs length >= 2 and max > min.
std::vector<double> minmax_normalize(std::span<const double> xs);

enum class NormalizationMode { signed_diff, absolute_diff };

// Fills cot_norm/lum_norm across the whole aligned set (the axes of the
// scatter). absolute_diff takes |lum_diff| before rescaling.
void normalize_pairs(std::vector<AlignedPair>& pairs, NormalizationMode mode);

// aligned_pairs.csv: header
// `timestamp_utc,cot_mean,lum_diff_mean,n_samples,cot_norm,lum_norm`.
std::string serialize_aligned_pairs(std::span<const AlignedPair> pairs);
std::vector<AlignedPair> parse_aligned_pairs(const std::string& text);

} // namespace heliocot
