#include "tsd/filter_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "tsd/scoring.hpp"

namespace tsd {

namespace {

void check_same(const SpectrumMap& a, const SpectrumMap& b, const char* where) {
    if (a.channels != b.channels || a.height != b.height || a.width != b.width)
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

// Zero the spatial signal outside the centered support window. Operates on a
// conjugate-space spectrum; also returns the cropped spatial filter.
void project_support(SpectrumMap& conj_spec, int mh, int mw, std::vector<RealMap>* w_out) {
    const int h = conj_spec.height, wdt = conj_spec.width;
    const int r0 = (h - mh) / 2;
    const int c0 = (wdt - mw) / 2;
    if (w_out) w_out->clear();
    std::vector<std::complex<double>> buf(conj_spec.bins());
    for (int d = 0; d < conj_spec.channels; ++d) {
        std::complex<double>* ch = conj_spec.channel(d);
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = std::conj(ch[i]);
        dft2_inplace(buf, h, wdt, true);
        RealMap spatial(h, wdt);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < wdt; ++c) {
                const bool inside = r >= r0 && r < r0 + mh && c >= c0 && c < c0 + mw;
                spatial.at(r, c) = inside ? buf[static_cast<std::size_t>(r) * wdt + c].real() : 0.0;
            }
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = spatial.values[i];
        dft2_inplace(buf, h, wdt, false);
        for (std::size_t i = 0; i < buf.size(); ++i) ch[i] = std::conj(buf[i]);
        if (w_out) w_out->push_back(crop(spatial, mh, mw));
    }
}

} // namespace

SpectrumMap solve_h(const SpectrumMap& g_spec, const SpectrumMap& zeta_spec, double mu,
                    double lambda, int support_h, int support_w) {
    check_same(g_spec, zeta_spec, "solve_h");
    if (lambda + mu == 0.0) throw std::invalid_argument("solve_h: lambda + mu must be nonzero");
    if (support_h > g_spec.height || support_w > g_spec.width)
        throw std::invalid_argument("solve_h: support larger than map");
    SpectrumMap h = g_spec;
    const double inv = 1.0 / (lambda + mu);
    for (std::size_t i = 0; i < h.values.size(); ++i)
        h.values[i] = inv * (2.0 * zeta_spec.values[i] + mu * g_spec.values[i]);
    project_support(h, support_h, support_w, nullptr);
    return h;
}

SpectrumMap solve_g(const std::vector<const SpectrumMap*>& samples_spec,
                    const std::vector<double>& alphas, const SpectrumMap& y_spec,
                    const SpectrumMap& h_spec, const SpectrumMap& zeta_spec, double mu) {
    if (samples_spec.empty()) throw std::invalid_argument("solve_g: empty sample list");
    if (samples_spec.size() != alphas.size())
        throw std::invalid_argument("solve_g: one alpha per sample required");
    check_same(h_spec, zeta_spec, "solve_g");
    for (const auto* s : samples_spec) check_same(*s, h_spec, "solve_g");

    SpectrumMap g = h_spec;
    const std::size_t bins = h_spec.bins();
    const std::complex<double>* y = y_spec.channel(0);
    for (int d = 0; d < h_spec.channels; ++d) {
        std::complex<double>* gd = g.channel(d);
        const std::complex<double>* hd = h_spec.channel(d);
        const std::complex<double>* zd = zeta_spec.channel(d);
        for (std::size_t u = 0; u < bins; ++u) {
            double sxx = 0.0;
            std::complex<double> sxy(0.0, 0.0);
            for (std::size_t f = 0; f < samples_spec.size(); ++f) {
                const std::complex<double> x = samples_spec[f]->channel(d)[u];
                sxx += alphas[f] * std::norm(x);
                sxy += alphas[f] * std::conj(x) * y[u];
            }
            gd[u] = (sxy - zd[u] + 0.5 * mu * hd[u]) / (sxx + 0.5 * mu);
        }
    }
    return g;
}

void update_zeta(SpectrumMap& zeta_spec, const SpectrumMap& g_spec,
                 const SpectrumMap& h_spec, double mu) {
    check_same(zeta_spec, g_spec, "update_zeta");
    check_same(zeta_spec, h_spec, "update_zeta");
    for (std::size_t i = 0; i < zeta_spec.values.size(); ++i)
        zeta_spec.values[i] += mu * (g_spec.values[i] - h_spec.values[i]);
}

FilterState train_filter_spectra(const std::vector<const SpectrumMap*>& samples_spec,
                                 const std::vector<double>& alphas,
                                 const SpectrumMap& y_spec, int support_h, int support_w,
                                 const AdmmConfig& cfg, const FilterState* warm) {
    if (samples_spec.empty()) throw std::invalid_argument("train_filter: empty set");
    const SpectrumMap& ref = *samples_spec.front();

    FilterState state;
    state.support_h = support_h;
    state.support_w = support_w;
    if (warm && warm->initialized()) {
        state.h_spec = warm->h_spec;
        state.g_spec = warm->g_spec;
        state.zeta_spec = warm->zeta_spec;
    } else {
        state.h_spec = SpectrumMap(ref.channels, ref.height, ref.width);
        state.g_spec = state.h_spec;
        state.zeta_spec = state.h_spec;
    }
    state.mu = cfg.mu0;

    for (int it = 0; it < cfg.iters; ++it) {
        state.g_spec = solve_g(samples_spec, alphas, y_spec, state.h_spec,
                               state.zeta_spec, state.mu);
        state.h_spec = solve_h(state.g_spec, state.zeta_spec, state.mu, cfg.lambda,
                               support_h, support_w);
        update_zeta(state.zeta_spec, state.g_spec, state.h_spec, state.mu);
        state.mu = std::min(state.mu * cfg.mu_scale, cfg.mu_max);
    }

    // Re-derive the cropped spatial filter from the final h spectrum.
    SpectrumMap h = state.h_spec;
    project_support(h, support_h, support_w, &state.w);
    state.h_spec = std::move(h);
    return state;
}

FilterState train_filter(const TrainingSet& set, const SpectrumMap& y_spec,
                         int support_h, int support_w, const AdmmConfig& cfg,
                         const FilterState* warm) {
    if (set.empty()) throw std::invalid_argument("train_filter: empty set");
    std::vector<const SpectrumMap*> spectra;
    std::vector<double> alphas;
    spectra.reserve(set.size());
    alphas.reserve(set.size());
    for (const auto& s : set.samples()) {
        spectra.push_back(&s.spectrum);
        alphas.push_back(s.score);
    }
    return train_filter_spectra(spectra, alphas, y_spec, support_h, support_w, cfg, warm);
}

double filter_objective(const FilterState& state,
                        const std::vector<const SpectrumMap*>& samples_spec,
                        const std::vector<double>& alphas, const SpectrumMap& y_spec,
                        double lambda) {
    double obj = 0.0;
    for (std::size_t f = 0; f < samples_spec.size(); ++f)
        obj += alphas[f] * residual_energy(state.h_spec, *samples_spec[f], y_spec);
    double reg = 0.0;
    for (const auto& wch : state.w)
        for (double v : wch.values) reg += v * v;
    return obj + 0.5 * lambda * reg;
}

} // namespace tsd
