#include "tsd/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tsd {

namespace {

std::mutex g_decoder_mutex;
std::map<std::string, ImageDecoder>& decoder_registry() {
    static std::map<std::string, ImageDecoder> registry;
    return registry;
}

std::string lower_ext(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

// Reads the next whitespace/comment-delimited token of a PNM header.
int read_pnm_int(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw std::runtime_error("bad PNM header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

Image read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image: " + path);
    char p = 0, type = 0;
    in.get(p);
    in.get(type);
    if (p != 'P' || (type != '5' && type != '6'))
        throw std::runtime_error("unsupported PNM type in " + path);
    const int channels = type == '6' ? 3 : 1;
    const int w = read_pnm_int(in);
    const int h = read_pnm_int(in);
    const int maxval = read_pnm_int(in);
    if (maxval != 255) throw std::runtime_error("only 8-bit PNM supported: " + path);
    Image img(h, w, channels);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw std::runtime_error("truncated image: " + path);
    return img;
}

} // namespace

void register_image_decoder(const std::string& extension, ImageDecoder decoder) {
    std::lock_guard<std::mutex> lock(g_decoder_mutex);
    decoder_registry()[extension] = std::move(decoder);
}

Image read_image(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "pgm" || ext == "ppm" || ext == "pnm") return read_pnm(path);
    ImageDecoder decoder;
    {
        std::lock_guard<std::mutex> lock(g_decoder_mutex);
        auto it = decoder_registry().find(ext);
        if (it != decoder_registry().end()) decoder = it->second;
    }
    if (decoder) return decoder(path);
    throw std::runtime_error("no decoder registered for ." + ext + " (" + path + ")");
}

void write_pnm(const Image& img, const std::string& path) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("write_pnm: channels must be 1 or 3");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path);
    out << (img.channels == 3 ? "P6" : "P5") << "\n"
        << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw std::runtime_error("short write: " + path);
}

} // namespace tsd
