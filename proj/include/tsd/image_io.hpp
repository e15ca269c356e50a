#ifndef TSD_IMAGE_IO_HPP_
#define TSD_IMAGE_IO_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tsd {

// 8-bit image, interleaved row-major. channels is 1 (gray) or 3 (RGB).
struct Image {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int h, int w, int ch, std::uint8_t fill = 0)
        : height(h), width(w), channels(ch),
          pixels(static_cast<std::size_t>(h) * w * ch, fill) {}

    std::uint8_t& at(int r, int c, int ch = 0) {
        return pixels[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }
    std::uint8_t at(int r, int c, int ch = 0) const {
        return pixels[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }
};

// Binary P5 (gray) / P6 (RGB) are decoded natively. Other extensions go
// through the decoder registry so callers can plug in e.g. a JPEG reader.
Image read_image(const std::string& path);
void write_pnm(const Image& img, const std::string& path);

using ImageDecoder = std::function<Image(const std::string& path)>;
void register_image_decoder(const std::string& extension, ImageDecoder decoder);

} // namespace tsd

#endif
