#pragma once

#include <filesystem>

#include "heliocot/config.hpp"

namespace heliocot {

struct SynthSummary {
    int frames = 0;
    int overpasses = 0;
};

// Generates a synthetic end-to-end dataset under out_dir:
//   images/img_#####.png  - fisheye frames, circumsolar disk at the true sun
//                           pixel with analytically chosen brightness
//   exif.csv              - exposure sidecar consumed by the luminance stage
//   cot.csv               - 3x3 COT grids at the overpass timestamps
//   clear_flags.csv       - is_clear labels (frames under COT-0 overpasses)
//   truth.csv             - per-frame quantized ground truth
//                           (timestamp_utc,true_l_norm,true_lum_diff)
// Output is a pure function of (config, seed): regeneration is bit-identical.
SynthSummary synth_dataset(const PipelineConfig& cfg, const std::filesystem::path& out_dir);

} // namespace heliocot
