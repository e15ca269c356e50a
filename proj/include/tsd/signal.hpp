#ifndef TSD_SIGNAL_HPP_
#define TSD_SIGNAL_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace tsd {

// Dense row-major 2-D real map.
struct RealMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    RealMap() = default;
    RealMap(int h, int w, double fill = 0.0)
        : height(h), width(w), values(static_cast<std::size_t>(h) * w, fill) {}

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
    std::size_t size() const { return values.size(); }
};

// Multi-channel frequency-domain map. Channel-major storage, all channels
// share the same height/width.
struct SpectrumMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<std::complex<double>> values;

    SpectrumMap() = default;
    SpectrumMap(int d, int h, int w)
        : channels(d), height(h), width(w),
          values(static_cast<std::size_t>(d) * h * w) {}

    std::size_t bins() const { return static_cast<std::size_t>(height) * width; }
    std::complex<double>* channel(int d) { return values.data() + d * bins(); }
    const std::complex<double>* channel(int d) const { return values.data() + d * bins(); }
    std::complex<double>& at(int d, int r, int c) {
        return values[d * bins() + static_cast<std::size_t>(r) * width + c];
    }
    std::complex<double> at(int d, int r, int c) const {
        return values[d * bins() + static_cast<std::size_t>(r) * width + c];
    }
};

// Detection output: response values plus peak bookkeeping. dpmr is filled by
// the scoring layer after the peak is known.
struct ResponseMap {
    RealMap values;
    int peak_row = 0;
    int peak_col = 0;
    double peak_value = 0.0;
    double dpmr = 0.0;
};

// Unnormalized forward 2-D DFT, one transform per channel.
SpectrumMap dft2(const std::vector<RealMap>& maps);
SpectrumMap dft2(const RealMap& map);

// Inverse DFT with 1/(H*W) normalization; real part returned.
std::vector<RealMap> idft2(const SpectrumMap& spec);
RealMap idft2_single(const SpectrumMap& spec, int channel = 0);

// Complex-to-complex transforms used by the solver's support projection.
void dft2_inplace(std::vector<std::complex<double>>& buf, int h, int w, bool inverse);

// Embed a small map centered into an h x w zero map. Leading pad per axis is
// floor((N - M) / 2).
RealMap crop_pad(const RealMap& small, int h, int w);

// Adjoint of crop_pad: extract the centered mh x mw window.
RealMap crop(const RealMap& big, int mh, int mw);

// 2-D Gaussian with peak 1 at the origin, wrap-around distances.
RealMap gaussian_label(int h, int w, double sigma);

// Separable raised-cosine window, zero at the boundary. 1x1 degenerates to 1.
RealMap hann_window(int h, int w);

// r = idft2( sum_d conj(filter_d) .* sample_d ), peak located.
ResponseMap correlate(const SpectrumMap& filter_spec, const SpectrumMap& sample_spec);

// Response from spectra already held in conjugate space (h_spec stores
// conj(dft(h)) inside FilterState, so no extra conjugation is needed there).
ResponseMap correlate_conj(const SpectrumMap& conj_filter_spec, const SpectrumMap& sample_spec);

SpectrumMap conj_spectrum(const SpectrumMap& spec);

void locate_peak(ResponseMap& r);

} // namespace tsd

#endif
