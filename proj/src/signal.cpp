#include "tsd/signal.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace tsd {

namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft is.
// Plans are cached per (h, w, sign) and created with FFTW_UNALIGNED so they
// can run on any buffer.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int h, int w, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(h, w, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<fftw_complex> tmp(static_cast<std::size_t>(h) * w);
        fftw_plan p = fftw_plan_dft_2d(h, w, tmp.data(), tmp.data(), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void run_fft(std::complex<double>* data, int h, int w, int sign) {
    fftw_plan p = PlanCache::instance().get(h, w, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void check_dims(int h, int w) {
    if (h < 1 || w < 1) throw std::invalid_argument("map dimensions must be >= 1x1");
}

} // namespace

void dft2_inplace(std::vector<std::complex<double>>& buf, int h, int w, bool inverse) {
    check_dims(h, w);
    if (buf.size() != static_cast<std::size_t>(h) * w)
        throw std::invalid_argument("dft2_inplace: buffer size mismatch");
    run_fft(buf.data(), h, w, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
    if (inverse) {
        const double norm = 1.0 / (static_cast<double>(h) * w);
        for (auto& v : buf) v *= norm;
    }
}

SpectrumMap dft2(const std::vector<RealMap>& maps) {
    if (maps.empty()) throw std::invalid_argument("dft2: no channels");
    const int h = maps[0].height, w = maps[0].width;
    check_dims(h, w);
    SpectrumMap spec(static_cast<int>(maps.size()), h, w);
    for (std::size_t d = 0; d < maps.size(); ++d) {
        if (maps[d].height != h || maps[d].width != w)
            throw std::invalid_argument("dft2: channel dimension mismatch");
        std::complex<double>* out = spec.channel(static_cast<int>(d));
        for (std::size_t i = 0; i < maps[d].size(); ++i) out[i] = maps[d].values[i];
        run_fft(out, h, w, FFTW_FORWARD);
    }
    return spec;
}

SpectrumMap dft2(const RealMap& map) {
    return dft2(std::vector<RealMap>{map});
}

std::vector<RealMap> idft2(const SpectrumMap& spec) {
    check_dims(spec.height, spec.width);
    std::vector<RealMap> out;
    out.reserve(spec.channels);
    std::vector<std::complex<double>> buf(spec.bins());
    const double norm = 1.0 / static_cast<double>(spec.bins());
    for (int d = 0; d < spec.channels; ++d) {
        const std::complex<double>* in = spec.channel(d);
        std::copy(in, in + spec.bins(), buf.begin());
        run_fft(buf.data(), spec.height, spec.width, FFTW_BACKWARD);
        RealMap m(spec.height, spec.width);
        for (std::size_t i = 0; i < buf.size(); ++i) m.values[i] = buf[i].real() * norm;
        out.push_back(std::move(m));
    }
    return out;
}

RealMap idft2_single(const SpectrumMap& spec, int channel) {
    if (channel < 0 || channel >= spec.channels)
        throw std::invalid_argument("idft2_single: bad channel");
    std::vector<std::complex<double>> buf(spec.bins());
    const std::complex<double>* in = spec.channel(channel);
    std::copy(in, in + spec.bins(), buf.begin());
    run_fft(buf.data(), spec.height, spec.width, FFTW_BACKWARD);
    RealMap m(spec.height, spec.width);
    const double norm = 1.0 / static_cast<double>(spec.bins());
    for (std::size_t i = 0; i < buf.size(); ++i) m.values[i] = buf[i].real() * norm;
    return m;
}

RealMap crop_pad(const RealMap& small, int h, int w) {
    if (small.height > h || small.width > w)
        throw std::invalid_argument("crop_pad: source larger than target");
    RealMap out(h, w);
    const int r0 = (h - small.height) / 2;
    const int c0 = (w - small.width) / 2;
    for (int r = 0; r < small.height; ++r)
        for (int c = 0; c < small.width; ++c)
            out.at(r0 + r, c0 + c) = small.at(r, c);
    return out;
}

RealMap crop(const RealMap& big, int mh, int mw) {
    if (mh > big.height || mw > big.width)
        throw std::invalid_argument("crop: window larger than source");
    RealMap out(mh, mw);
    const int r0 = (big.height - mh) / 2;
    const int c0 = (big.width - mw) / 2;
    for (int r = 0; r < mh; ++r)
        for (int c = 0; c < mw; ++c)
            out.at(r, c) = big.at(r0 + r, c0 + c);
    return out;
}

RealMap gaussian_label(int h, int w, double sigma) {
    check_dims(h, w);
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_label: sigma must be positive");
    RealMap out(h, w);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (int r = 0; r < h; ++r) {
        const int dr = std::min(r, h - r);
        for (int c = 0; c < w; ++c) {
            const int dc = std::min(c, w - c);
            out.at(r, c) = std::exp(-(dr * dr + dc * dc) * inv);
        }
    }
    return out;
}

RealMap hann_window(int h, int w) {
    check_dims(h, w);
    auto hann1 = [](int n) {
        std::vector<double> v(n, 1.0);
        if (n > 1) {
            const double k = 2.0 * M_PI / (n - 1);
            for (int i = 0; i < n; ++i) v[i] = 0.5 * (1.0 - std::cos(k * i));
        }
        return v;
    };
    const std::vector<double> hr = hann1(h), hc = hann1(w);
    RealMap out(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            out.at(r, c) = hr[r] * hc[c];
    return out;
}

void locate_peak(ResponseMap& r) {
    const RealMap& m = r.values;
    r.peak_row = 0;
    r.peak_col = 0;
    r.peak_value = m.values.empty() ? 0.0 : m.values[0];
    for (int i = 0; i < m.height; ++i)
        for (int j = 0; j < m.width; ++j)
            if (m.at(i, j) > r.peak_value) {
                r.peak_value = m.at(i, j);
                r.peak_row = i;
                r.peak_col = j;
            }
}

ResponseMap correlate_conj(const SpectrumMap& f, const SpectrumMap& z) {
    if (f.channels != z.channels || f.height != z.height || f.width != z.width)
        throw std::invalid_argument("correlate: dimension/channel mismatch");
    SpectrumMap acc(1, f.height, f.width);
    for (int d = 0; d < f.channels; ++d) {
        const std::complex<double>* a = f.channel(d);
        const std::complex<double>* b = z.channel(d);
        std::complex<double>* o = acc.channel(0);
        for (std::size_t i = 0; i < acc.bins(); ++i) o[i] += a[i] * b[i];
    }
    ResponseMap r;
    r.values = idft2_single(acc);
    locate_peak(r);
    return r;
}

ResponseMap correlate(const SpectrumMap& filter_spec, const SpectrumMap& sample_spec) {
    return correlate_conj(conj_spectrum(filter_spec), sample_spec);
}

SpectrumMap conj_spectrum(const SpectrumMap& spec) {
    SpectrumMap out = spec;
    for (auto& v : out.values) v = std::conj(v);
    return out;
}

} // namespace tsd
