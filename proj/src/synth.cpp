#include "tsd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "tsd/image_io.hpp"

namespace tsd {

namespace {

Image random_texture(int h, int w, int channels, int lo, int hi, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(lo, hi);
    Image img(h, w, channels);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(dist(rng));
    return img;
}

Image block_texture(int h, int w, int channels, int block, int lo, int hi,
                    std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(lo, hi);
    Image img(h, w, channels);
    for (int br = 0; br < (h + block - 1) / block; ++br)
        for (int bc = 0; bc < (w + block - 1) / block; ++bc) {
            for (int ch = 0; ch < channels; ++ch) {
                const int v = dist(rng);
                for (int r = br * block; r < std::min(h, (br + 1) * block); ++r)
                    for (int c = bc * block; c < std::min(w, (bc + 1) * block); ++c)
                        img.at(r, c, ch) = static_cast<std::uint8_t>(v);
            }
        }
    return img;
}

void blit(Image& dst, const Image& src, int top, int left) {
    for (int r = 0; r < src.height; ++r) {
        const int dr = top + r;
        if (dr < 0 || dr >= dst.height) continue;
        for (int c = 0; c < src.width; ++c) {
            const int dc = left + c;
            if (dc < 0 || dc >= dst.width) continue;
            for (int ch = 0; ch < dst.channels; ++ch) dst.at(dr, dc, ch) = src.at(r, c, ch);
        }
    }
}

Image resize_nearest(const Image& src, int h, int w) {
    Image out(h, w, src.channels);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const int sr = std::min(src.height - 1, r * src.height / h);
            const int sc = std::min(src.width - 1, c * src.width / w);
            for (int ch = 0; ch < src.channels; ++ch) out.at(r, c, ch) = src.at(sr, sc, ch);
        }
    return out;
}

} // namespace

bool synth_is_occluded(const SynthSpec& spec, int frame) {
    for (const auto& [s, e] : spec.occlusions)
        if (frame >= s && frame <= e) return true;
    return false;
}

std::string synth_sequence(const SynthSpec& spec, const std::string& out_dir) {
    if (spec.frames < 2) throw std::invalid_argument("synth_sequence: frames must be >= 2");
    if (spec.target_height > spec.frame_height || spec.target_width > spec.frame_width)
        throw std::invalid_argument("synth_sequence: target larger than frame");

    namespace fs = std::filesystem;
    const fs::path seq_dir = fs::path(out_dir) / spec.name;
    fs::create_directories(seq_dir / "img");

    const int ch = spec.rgb ? 3 : 1;
    // Background contrast stays well below the target's so the visible target
    // always dominates the response; the blocks only give weak anchoring.
    const Image background =
        block_texture(spec.frame_height, spec.frame_width, ch, 8, 55, 85, spec.seed * 7919u + 1);
    const Image target_tex =
        random_texture(spec.target_height, spec.target_width, ch, 120, 255, spec.seed * 7919u + 2);
    const int occ_h = spec.target_height + spec.target_height / 2 + 4;
    const int occ_w = spec.target_width + spec.target_width / 2 + 4;
    // The occluder stays in the background intensity range so a hidden target
    // really is gone from the features instead of replaced by a lookalike.
    const Image occluder = random_texture(occ_h, occ_w, ch, 35, 75, spec.seed * 7919u + 3);
    std::mt19937 noise_rng(spec.seed * 7919u + 4);
    std::uniform_int_distribution<int> noise(-static_cast<int>(std::lround(spec.noise_level)),
                                             static_cast<int>(std::lround(spec.noise_level)));

    std::ofstream gt(seq_dir / "groundtruth.txt");
    if (!gt) throw std::runtime_error("cannot write groundtruth");

    const std::string ext = spec.rgb ? "ppm" : "pgm";
    double cx = spec.start_cx, cy = spec.start_cy;
    double th = spec.target_height, tw = spec.target_width;
    for (int t = 1; t <= spec.frames; ++t) {
        Image frame = background;
        if (spec.noise_level > 0.0)
            for (auto& p : frame.pixels)
                p = static_cast<std::uint8_t>(std::clamp(static_cast<int>(p) + noise(noise_rng), 0, 255));

        const int ith = std::max(4, static_cast<int>(std::lround(th)));
        const int itw = std::max(4, static_cast<int>(std::lround(tw)));
        const Image tgt = (ith == spec.target_height && itw == spec.target_width)
                              ? target_tex
                              : resize_nearest(target_tex, ith, itw);
        blit(frame, tgt, static_cast<int>(std::lround(cy - ith / 2.0)),
             static_cast<int>(std::lround(cx - itw / 2.0)));

        // The occluder parks on the target during the interval and slides off
        // vertically on both sides of it.
        double best_dist = 1e18;
        bool draw_occ = false;
        double ox = 0.0, oy = 0.0;
        for (const auto& [s, e] : spec.occlusions) {
            double dy;
            // a fast pass keeps the deceptive partially-covered phase short
            if (t < s)
                dy = -24.0 * (s - t);
            else if (t > e)
                dy = -24.0 * (t - e);
            else
                dy = 0.0;
            if (std::abs(dy) < best_dist) {
                best_dist = std::abs(dy);
                ox = cx;
                oy = cy + dy;
                draw_occ = std::abs(dy) < spec.frame_height;
            }
        }
        if (draw_occ)
            blit(frame, occluder, static_cast<int>(std::lround(oy - occ_h / 2.0)),
                 static_cast<int>(std::lround(ox - occ_w / 2.0)));

        char name[32];
        std::snprintf(name, sizeof(name), "%04d.%s", t, ext.c_str());
        write_pnm(frame, (seq_dir / "img" / name).string());

        char line[128];
        std::snprintf(line, sizeof(line), "%.2f,%.2f,%.2f,%.2f\n", cx - itw / 2.0,
                      cy - ith / 2.0, static_cast<double>(itw), static_cast<double>(ith));
        gt << line;

        cx += spec.vx;
        cy += spec.vy;
        th *= spec.size_decay;
        tw *= spec.size_decay;
    }

    std::ofstream attrs(seq_dir / "attributes.txt");
    if (!spec.occlusions.empty()) attrs << "full_occlusion\n";
    attrs << "synthetic\n";
    return seq_dir.string();
}

} // namespace tsd
