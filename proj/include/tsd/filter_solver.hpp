#ifndef TSD_FILTER_SOLVER_HPP_
#define TSD_FILTER_SOLVER_HPP_

#include <vector>

#include "tsd/signal.hpp"
#include "tsd/training_set.hpp"

namespace tsd {

struct AdmmConfig {
    double lambda = 0.01;
    double mu0 = 1.0;
    double mu_scale = 2.0;
    double mu_max = 1000.0;
    int iters = 2;
    int alternations = 1;
};

// ADMM state. h_spec / g_spec / zeta_spec are held in conjugate space, i.e.
// h_spec stores conj(dft(h)) so a response is idft(sum_d h_spec .* x_spec).
// h always corresponds to a spatial map that is zero outside the centered
// support window.
struct FilterState {
    std::vector<RealMap> w; // cropped support per channel
    SpectrumMap h_spec;
    SpectrumMap g_spec;
    SpectrumMap zeta_spec;
    double mu = 1.0;
    int support_h = 0;
    int support_w = 0;

    bool initialized() const { return h_spec.channels > 0; }
};

// Per-bin h update (lambda + mu)^-1 (2 zeta + mu g), followed by the support
// projection: to spatial, zero outside the centered mh x mw window, back.
SpectrumMap solve_h(const SpectrumMap& g_spec, const SpectrumMap& zeta_spec, double mu,
                    double lambda, int support_h, int support_w);

// Per-bin closed form for g, each frequency bin and channel independent.
SpectrumMap solve_g(const std::vector<const SpectrumMap*>& samples_spec,
                    const std::vector<double>& alphas, const SpectrumMap& y_spec,
                    const SpectrumMap& h_spec, const SpectrumMap& zeta_spec, double mu);

// zeta <- zeta + mu (g - h)
void update_zeta(SpectrumMap& zeta_spec, const SpectrumMap& g_spec,
                 const SpectrumMap& h_spec, double mu);

// Runs cfg.iters ADMM sweeps over the scored set, warm-starting from `state`
// when it is already initialized (zeta persists, mu restarts at mu0).
FilterState train_filter(const TrainingSet& set, const SpectrumMap& y_spec,
                         int support_h, int support_w, const AdmmConfig& cfg,
                         const FilterState* warm = nullptr);

// Low-level variant on raw spectra.
FilterState train_filter_spectra(const std::vector<const SpectrumMap*>& samples_spec,
                                 const std::vector<double>& alphas,
                                 const SpectrumMap& y_spec, int support_h, int support_w,
                                 const AdmmConfig& cfg, const FilterState* warm = nullptr);

// Weighted data term plus regularizer of the training objective, evaluated in
// the spatial domain. Used by tests and diagnostics.
double filter_objective(const FilterState& state,
                        const std::vector<const SpectrumMap*>& samples_spec,
                        const std::vector<double>& alphas, const SpectrumMap& y_spec,
                        double lambda);

} // namespace tsd

#endif
