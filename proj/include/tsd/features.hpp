#ifndef TSD_FEATURES_HPP_
#define TSD_FEATURES_HPP_

#include <memory>
#include <string>
#include <vector>

#include "tsd/geometry.hpp"
#include "tsd/image_io.hpp"
#include "tsd/signal.hpp"

namespace tsd {

enum class FeatureKind { kGray, kCn };

FeatureKind parse_feature_kind(const std::string& name);
std::string feature_kind_name(FeatureKind kind);

// Multi-channel spatial feature map; all channels share dimensions.
struct FeatureMap {
    int cell_size = 1;
    std::vector<RealMap> channels;

    int height() const { return channels.empty() ? 0 : channels[0].height; }
    int width() const { return channels.empty() ? 0 : channels[0].width; }
    int channel_count() const { return static_cast<int>(channels.size()); }
};

// Color-names lookup: 32768 rows x 10 columns, RGB quantized to 5 bits per
// channel. File layout: row-major little-endian 64-bit reals.
class CnTable {
public:
    static constexpr int kRows = 32768;
    static constexpr int kCols = 10;

    static CnTable load(const std::string& path);

    const double* row(std::uint8_t r, std::uint8_t g, std::uint8_t b) const {
        const int idx = (r / 8) * 1024 + (g / 8) * 32 + (b / 8);
        return data_.data() + static_cast<std::size_t>(idx) * kCols;
    }

private:
    std::vector<double> data_;
};

// Patch of size padded_scale * box dims centered on the box, edge-replicated
// outside the frame, bilinearly resampled to out_h x out_w pixels.
Image extract_patch(const Image& img, const BoundingBox& box, double padded_scale,
                    int out_h, int out_w);

// Cell-averaged features with the cosine window applied per channel.
// gray: 1 channel in [-0.5, 0.5]; cn: 10 channels of table probabilities.
FeatureMap extract_features(const Image& patch, FeatureKind kind, int cell_size,
                            const CnTable* table = nullptr);

} // namespace tsd

#endif
