#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heliocot/time.hpp"

namespace heliocot {

inline constexpr double kCotMin = 0.0;
inline constexpr double kCotMax = 100.0;

// One satellite observation: a 3x3 block of cloud optical thickness values
// centered on the camera site, row-major, with a fill mask for missing cells.
struct CotGrid {
    UtcInstant timestamp;
    std::array<double, 9> values{};  // meaningless where fill[i] is true
    std::array<bool, 9> fill{};

    int valid_count() const;
};

// CSV format: header `timestamp_utc,c00,c01,c02,c10,c11,c12,c20,c21,c22`,
// cells decimal in [0, 100] or NA, timestamps strictly increasing.
std::vector<CotGrid> parse_cot_csv(const std::string& text);
std::string serialize_cot_csv(std::span<const CotGrid> grids);

// Mean over non-fill cells. Throws on an all-fill grid.
double mean_cot(const CotGrid& grid);

struct CotMean {
    UtcInstant timestamp;
    double mean = 0.0;
    int n_valid = 0;
};

// Reduces each grid to its valid-cell mean, dropping grids with fewer than
// min_valid_cells valid cells; each drop is reported through warn.
std::vector<CotMean> reduce_cot(std::span<const CotGrid> grids, int min_valid_cells,
                                const std::function<void(const std::string&)>& warn = {});

// cot_mean.csv: header `timestamp_utc,cot_mean,n_valid`.
std::string serialize_cot_means(std::span<const CotMean> means);
std::vector<CotMean> parse_cot_means(const std::string& text);

} // namespace heliocot
