#include "tsd/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tsd {

FeatureKind parse_feature_kind(const std::string& name) {
    if (name == "gray") return FeatureKind::kGray;
    if (name == "cn") return FeatureKind::kCn;
    throw std::invalid_argument("unknown feature kind: " + name);
}

std::string feature_kind_name(FeatureKind kind) {
    return kind == FeatureKind::kGray ? "gray" : "cn";
}

CnTable CnTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open CN table: " + path);
    CnTable table;
    table.data_.resize(static_cast<std::size_t>(kRows) * kCols);
    in.read(reinterpret_cast<char*>(table.data_.data()),
            static_cast<std::streamsize>(table.data_.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(table.data_.size() * sizeof(double)))
        throw std::runtime_error("CN table truncated: " + path);
    for (double v : table.data_)
        if (!std::isfinite(v)) throw std::runtime_error("CN table has non-finite entries");
    return table;
}

Image extract_patch(const Image& img, const BoundingBox& box, double padded_scale,
                    int out_h, int out_w) {
    if (!box.valid()) throw std::invalid_argument("extract_patch: degenerate box");
    if (out_h < 1 || out_w < 1) throw std::invalid_argument("extract_patch: bad output size");
    const double src_h = box.h * padded_scale;
    const double src_w = box.w * padded_scale;
    const double top = box.cy - src_h / 2.0;
    const double left = box.cx - src_w / 2.0;
    Image out(out_h, out_w, img.channels);
    // Bilinear sampling on pixel centers, edge replication outside the frame.
    for (int r = 0; r < out_h; ++r) {
        const double sy = top + (r + 0.5) * src_h / out_h - 0.5;
        const int y0 = static_cast<int>(std::floor(sy));
        const double fy = sy - y0;
        const int ya = std::clamp(y0, 0, img.height - 1);
        const int yb = std::clamp(y0 + 1, 0, img.height - 1);
        for (int c = 0; c < out_w; ++c) {
            const double sx = left + (c + 0.5) * src_w / out_w - 0.5;
            const int x0 = static_cast<int>(std::floor(sx));
            const double fx = sx - x0;
            const int xa = std::clamp(x0, 0, img.width - 1);
            const int xb = std::clamp(x0 + 1, 0, img.width - 1);
            for (int ch = 0; ch < img.channels; ++ch) {
                const double v =
                    (1 - fy) * ((1 - fx) * img.at(ya, xa, ch) + fx * img.at(ya, xb, ch)) +
                    fy * ((1 - fx) * img.at(yb, xa, ch) + fx * img.at(yb, xb, ch));
                out.at(r, c, ch) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

FeatureMap extract_features(const Image& patch, FeatureKind kind, int cell_size,
                            const CnTable* table) {
    if (cell_size < 1) throw std::invalid_argument("extract_features: bad cell size");
    if (patch.height % cell_size != 0 || patch.width % cell_size != 0)
        throw std::invalid_argument("extract_features: patch dims not divisible by cell size");
    if (kind == FeatureKind::kCn && table == nullptr)
        throw std::invalid_argument("extract_features: cn requires a CnTable");

    const int ch = patch.height / cell_size;
    const int cw = patch.width / cell_size;
    const int nchan = kind == FeatureKind::kGray ? 1 : CnTable::kCols;
    FeatureMap fm;
    fm.cell_size = cell_size;
    fm.channels.assign(nchan, RealMap(ch, cw));

    const double inv_cell = 1.0 / (cell_size * cell_size);
    // Gray cells are centered on the patch mean so the dominant DC term does
    // not swamp the target-vs-background contrast.
    double patch_mean = 0.0;
    if (kind == FeatureKind::kGray) {
        for (std::size_t i = 0; i < patch.pixels.size(); ++i) patch_mean += patch.pixels[i];
        patch_mean /= 255.0 * static_cast<double>(patch.pixels.size());
    }
    for (int cr = 0; cr < ch; ++cr) {
        for (int cc = 0; cc < cw; ++cc) {
            if (kind == FeatureKind::kGray) {
                double sum = 0.0;
                for (int r = cr * cell_size; r < (cr + 1) * cell_size; ++r)
                    for (int c = cc * cell_size; c < (cc + 1) * cell_size; ++c) {
                        double v = 0.0;
                        for (int k = 0; k < patch.channels; ++k) v += patch.at(r, c, k);
                        sum += v / patch.channels;
                    }
                fm.channels[0].at(cr, cc) = sum * inv_cell / 255.0 - patch_mean;
            } else {
                double acc[CnTable::kCols] = {};
                for (int r = cr * cell_size; r < (cr + 1) * cell_size; ++r)
                    for (int c = cc * cell_size; c < (cc + 1) * cell_size; ++c) {
                        std::uint8_t rv, gv, bv;
                        if (patch.channels == 3) {
                            rv = patch.at(r, c, 0);
                            gv = patch.at(r, c, 1);
                            bv = patch.at(r, c, 2);
                        } else {
                            rv = gv = bv = patch.at(r, c, 0);
                        }
                        const double* row = table->row(rv, gv, bv);
                        for (int k = 0; k < CnTable::kCols; ++k) acc[k] += row[k];
                    }
                for (int k = 0; k < CnTable::kCols; ++k)
                    fm.channels[k].at(cr, cc) = acc[k] * inv_cell;
            }
        }
    }

    const RealMap win = hann_window(ch, cw);
    for (auto& chan : fm.channels)
        for (std::size_t i = 0; i < chan.values.size(); ++i)
            chan.values[i] *= win.values[i];
    return fm;
}

} // namespace tsd
