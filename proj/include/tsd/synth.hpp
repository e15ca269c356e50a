#ifndef TSD_SYNTH_HPP_
#define TSD_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsd/geometry.hpp"

namespace tsd {

// Deterministic desk-scale sequence: textured target over a textured
// background, linear motion, optional full occlusions by an opaque distractor
// that crosses the target.
struct SynthSpec {
    std::string name = "synth";
    int frames = 100;
    int frame_height = 120;
    int frame_width = 160;
    int target_height = 24;
    int target_width = 24;
    double start_cx = 40.0;
    double start_cy = 60.0;
    double vx = 2.0;
    double vy = 0.0;
    double size_decay = 1.0; // per-frame multiplicative target size change
    std::vector<std::pair<int, int>> occlusions; // inclusive 1-based frame ranges
    double noise_level = 2.0; // stddev of per-pixel intensity noise
    bool rgb = false;
    std::uint32_t seed = 0;
};

// Materializes <out_dir>/<name>/img/0001.p?m ... plus groundtruth.txt and
// attributes.txt. Returns the sequence directory.
std::string synth_sequence(const SynthSpec& spec, const std::string& out_dir);

bool synth_is_occluded(const SynthSpec& spec, int frame); // 1-based

} // namespace tsd

#endif
