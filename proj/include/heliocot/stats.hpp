#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "heliocot/pipeline.hpp"

namespace heliocot {

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;   // Pearson correlation, [-1, 1]
    double r2 = 0.0;  // r * r
    long n = 0;       // >= 3
};

// Product-moment correlation. Needs equal lengths >= 3, both non-constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Rank correlation with average ranks on ties; same preconditions.
double spearman(std::span<const double> xs, std::span<const double> ys);

// OLS of ys on xs; preconditions as pearson.
RegressionResult fit_line(std::span<const double> xs, std::span<const double> ys);

// Indices of points whose studentized residual exceeds the threshold.
// Flagged, never removed.
std::vector<std::size_t> flag_outliers(std::span<const double> xs, std::span<const double> ys,
                                       const RegressionResult& fit, double threshold = 3.0);

// Deterministic SVG scatter of the normalized pairs, unit axes, optional fit
// line drawn from x=0 to x=1. Identical inputs give identical bytes.
std::string render_scatter_svg(std::span<const AlignedPair> pairs, const RegressionResult* fit,
                               std::span<const std::size_t> outliers = {});

// scatter_points.csv: header `cot_norm,lum_norm,outlier`.
std::string serialize_scatter_points(std::span<const AlignedPair> pairs,
                                     std::span<const std::size_t> outliers = {});

// Writes the SVG and its companion CSV next to each other (atomic writes).
void emit_scatter(std::span<const AlignedPair> pairs, const RegressionResult* fit,
                  const std::filesystem::path& svg_path, const std::filesystem::path& csv_path,
                  std::span<const std::size_t> outliers = {});

} // namespace heliocot
