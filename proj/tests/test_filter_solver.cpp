#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "tsd/filter_solver.hpp"
#include "tsd/scoring.hpp"

using namespace tsd;

namespace {

FilterState train_on(const std::vector<RealMap>& samples, const std::vector<double>& alphas,
                     const RealMap& y, int mh, int mw, const AdmmConfig& cfg) {
    std::vector<SpectrumMap> spectra;
    spectra.reserve(samples.size());
    for (const auto& s : samples) spectra.push_back(dft2(s));
    std::vector<const SpectrumMap*> ptrs;
    for (const auto& s : spectra) ptrs.push_back(&s);
    return train_filter_spectra(ptrs, alphas, dft2(y), mh, mw, cfg);
}

} // namespace

TEST_CASE("solve_h trivial cases") {
    SpectrumMap g(1, 8, 8), zeta(1, 8, 8);
    SpectrumMap h = solve_h(g, zeta, 1.0, 0.01, 4, 4);
    for (const auto& v : h.values) CHECK(std::abs(v) == 0.0);

    // lambda = 0, zeta = 0: spatial h equals the crop-projection of g
    std::mt19937 rng(1);
    RealMap gsp = oracle::random_map(8, 8, rng);
    SpectrumMap gs = conj_spectrum(dft2(gsp)); // conjugate space
    SpectrumMap hs = solve_h(gs, zeta, 2.0, 0.0, 4, 4);
    RealMap h_spatial = idft2(conj_spectrum(hs))[0];
    const RealMap expected = crop_pad(crop(gsp, 4, 4), 8, 8);
    for (std::size_t i = 0; i < h_spatial.values.size(); ++i)
        CHECK(h_spatial.values[i] == doctest::Approx(expected.values[i]).epsilon(1e-10));

    CHECK_THROWS(solve_h(g, zeta, 0.0, 0.0, 4, 4));
}

TEST_CASE("solve_h matches the dense quadratic minimizer of the h-subproblem") {
    // minimize (lambda/2)|h|^2 - <2 zeta, h> ... per-bin followed by support
    // projection; the dense check: for random g, zeta, the spatial result is
    // the support-masked idft of (2 zeta + mu g)/(lambda + mu).
    std::mt19937 rng(2);
    SpectrumMap g = conj_spectrum(dft2(oracle::random_map(8, 8, rng)));
    SpectrumMap zeta = conj_spectrum(dft2(oracle::random_map(8, 8, rng)));
    const double mu = 1.7, lambda = 0.3;
    SpectrumMap h = solve_h(g, zeta, mu, lambda, 4, 4);

    SpectrumMap pre = g;
    for (std::size_t i = 0; i < pre.values.size(); ++i)
        pre.values[i] = (2.0 * zeta.values[i] + mu * g.values[i]) / (lambda + mu);
    RealMap pre_spatial = idft2(conj_spectrum(pre))[0];
    RealMap expected = crop_pad(crop(pre_spatial, 4, 4), 8, 8);
    RealMap got = idft2(conj_spectrum(h))[0];
    for (std::size_t i = 0; i < got.values.size(); ++i)
        CHECK(got.values[i] == doctest::Approx(expected.values[i]).epsilon(1e-8));
}

TEST_CASE("solve_g normal-equation limit: delta sample recovers the label") {
    // x = spatial delta -> x_hat all ones; alpha=1, mu -> 0, zeta = 0
    RealMap delta(8, 8);
    delta.at(0, 0) = 1.0;
    SpectrumMap xs = dft2(delta);
    RealMap y = gaussian_label(8, 8, 1.0);
    SpectrumMap ys = dft2(y);
    SpectrumMap h(1, 8, 8), zeta(1, 8, 8);
    SpectrumMap g = solve_g({&xs}, {1.0}, ys, h, zeta, 1e-12);
    for (std::size_t i = 0; i < g.values.size(); ++i)
        CHECK(std::abs(g.values[i] - std::conj(ys.values[i])) < 1e-8);
}

TEST_CASE("solve_g with all-zero alphas is driven by the consensus term") {
    std::mt19937 rng(3);
    SpectrumMap xs = dft2(oracle::random_map(8, 8, rng));
    SpectrumMap ys = dft2(gaussian_label(8, 8, 1.0));
    SpectrumMap h = conj_spectrum(dft2(oracle::random_map(8, 8, rng)));
    SpectrumMap zeta = conj_spectrum(dft2(oracle::random_map(8, 8, rng)));
    const double mu = 2.0;
    SpectrumMap g = solve_g({&xs}, {0.0}, ys, h, zeta, mu);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const auto expected = (2.0 / mu) * (-zeta.values[i] + 0.5 * mu * h.values[i]);
        CHECK(std::abs(g.values[i] - expected) < 1e-10);
    }
}

TEST_CASE("solve_g matches a per-bin scalar least-squares oracle") {
    std::mt19937 rng(4);
    const int F = 3, D = 2;
    std::vector<SpectrumMap> xs;
    std::vector<const SpectrumMap*> ptrs;
    for (int f = 0; f < F; ++f)
        xs.push_back(dft2(std::vector<RealMap>{oracle::random_map(8, 8, rng),
                                               oracle::random_map(8, 8, rng)}));
    for (auto& x : xs) ptrs.push_back(&x);
    std::vector<double> alphas{0.5, 0.3, 0.2};
    SpectrumMap ys = dft2(gaussian_label(8, 8, 1.0));
    SpectrumMap h = conj_spectrum(dft2(std::vector<RealMap>{oracle::random_map(8, 8, rng),
                                                            oracle::random_map(8, 8, rng)}));
    SpectrumMap zeta(D, 8, 8);
    const double mu = 0.7;
    SpectrumMap g = solve_g(ptrs, alphas, ys, h, zeta, mu);

    // Oracle: independent scalar solve per (bin, channel)
    for (int d = 0; d < D; ++d)
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) {
                double sxx = 0.0;
                std::complex<double> sxy(0.0, 0.0);
                for (int f = 0; f < F; ++f) {
                    const auto x = xs[f].at(d, r, c);
                    sxx += alphas[f] * std::norm(x);
                    sxy += alphas[f] * std::conj(x) * ys.at(0, r, c);
                }
                const auto expected = (sxy + 0.5 * mu * h.at(d, r, c)) / (sxx + 0.5 * mu);
                CHECK(std::abs(g.at(d, r, c) - expected) < 1e-8);
            }
}

TEST_CASE("update_zeta") {
    std::mt19937 rng(5);
    SpectrumMap g = dft2(oracle::random_map(4, 4, rng));
    SpectrumMap h = g;
    SpectrumMap zeta(1, 4, 4);
    update_zeta(zeta, g, h, 3.0);
    for (const auto& v : zeta.values) CHECK(std::abs(v) == 0.0);

    SpectrumMap h2 = dft2(oracle::random_map(4, 4, rng));
    update_zeta(zeta, g, h2, 2.0);
    for (std::size_t i = 0; i < zeta.values.size(); ++i)
        CHECK(std::abs(zeta.values[i] - 2.0 * (g.values[i] - h2.values[i])) < 1e-12);
}

TEST_CASE("ADMM consensus residual shrinks across iterations") {
    std::mt19937 rng(6);
    std::vector<RealMap> samples{oracle::random_map(8, 8, rng)};
    RealMap y = gaussian_label(8, 8, 1.0);
    std::vector<SpectrumMap> spectra{dft2(samples[0])};
    std::vector<const SpectrumMap*> ptrs{&spectra[0]};
    SpectrumMap ys = dft2(y);

    AdmmConfig cfg;
    cfg.iters = 1;
    cfg.mu_scale = 2.0;
    FilterState state;
    std::vector<double> residuals;
    for (int it = 0; it < 12; ++it) {
        cfg.mu0 = std::min(std::pow(2.0, it), cfg.mu_max);
        state = train_filter_spectra(ptrs, {1.0}, ys, 4, 4, cfg,
                                     state.initialized() ? &state : nullptr);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < state.g_spec.values.size(); ++i) {
            num += std::norm(state.g_spec.values[i] - state.h_spec.values[i]);
            den += std::norm(state.h_spec.values[i]);
        }
        residuals.push_back(std::sqrt(num / std::max(den, 1e-300)));
    }
    for (std::size_t i = 2; i + 1 < residuals.size(); ++i)
        CHECK(residuals[i + 1] <= residuals[i] + 1e-12);
    CHECK(residuals.back() <= 1e-2);
}

TEST_CASE("training on a single noise-free sample approximates the label") {
    // A smooth centered blob: a compact-support filter can reproduce the
    // label almost exactly, so the constrained optimum has a tiny data term.
    RealMap x(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) {
            const double dr = r - 8, dc = c - 8;
            x.at(r, c) = std::exp(-(dr * dr + dc * dc) / 2.0);
        }
    std::vector<RealMap> samples{x};
    RealMap y = gaussian_label(16, 16, 1.5);
    AdmmConfig cfg;
    cfg.iters = 50;
    cfg.lambda = 1e-4;
    FilterState state = train_on(samples, {1.0}, y, 8, 8, cfg);

    ResponseMap r = correlate_conj(state.h_spec, dft2(samples[0]));
    CHECK(r.peak_row == 0);
    CHECK(r.peak_col == 0);
    double err = 0.0, ynorm = 0.0;
    for (std::size_t i = 0; i < y.values.size(); ++i) {
        err += (y.values[i] - r.values.values[i]) * (y.values[i] - r.values.values[i]);
        ynorm += y.values[i] * y.values[i];
    }
    CHECK(err / ynorm < 0.10);
}

TEST_CASE("huge lambda drives the filter to zero") {
    std::mt19937 rng(8);
    std::vector<RealMap> samples{oracle::random_map(8, 8, rng)};
    RealMap y = gaussian_label(8, 8, 1.0);
    AdmmConfig cfg;
    cfg.iters = 30;
    FilterState base = train_on(samples, {1.0}, y, 4, 4, cfg);
    cfg.lambda = 1e12;
    FilterState tiny = train_on(samples, {1.0}, y, 4, 4, cfg);

    auto norm_w = [](const FilterState& s) {
        double n = 0.0;
        for (const auto& ch : s.w)
            for (double v : ch.values) n += v * v;
        return std::sqrt(n);
    };
    CHECK(norm_w(tiny) < 1e-6 * norm_w(base));
}

TEST_CASE("ADMM fixed point matches the dense constrained least-squares oracle") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 3; ++trial) {
        const int F = 1 + trial;
        std::vector<RealMap> samples;
        std::vector<double> alphas;
        for (int f = 0; f < F; ++f) samples.push_back(oracle::random_map(8, 8, rng));
        double asum = 0.0;
        for (int f = 0; f < F; ++f) {
            alphas.push_back(0.5 + f);
            asum += alphas.back();
        }
        for (auto& a : alphas) a /= asum;
        RealMap y = gaussian_label(8, 8, 1.0);

        AdmmConfig cfg;
        cfg.iters = 200;
        cfg.lambda = 0.01;
        FilterState state = train_on(samples, alphas, y, 4, 4, cfg);

        std::vector<SpectrumMap> spectra;
        std::vector<const SpectrumMap*> ptrs;
        for (const auto& s : samples) spectra.push_back(dft2(s));
        for (const auto& s : spectra) ptrs.push_back(&s);
        const double admm_obj = filter_objective(state, ptrs, alphas, dft2(y), cfg.lambda);

        RealMap h_dense = oracle::dense_supported_filter(samples, alphas, y, 4, 4, cfg.lambda);
        const double dense_obj = oracle::dense_objective(h_dense, samples, alphas, y, cfg.lambda);
        CHECK(admm_obj == doctest::Approx(dense_obj).epsilon(1e-3));
        CHECK(admm_obj >= dense_obj - 1e-9); // the oracle is the true minimum
    }
}

TEST_CASE("scale equivariance of the data term at tiny lambda") {
    std::mt19937 rng(10);
    std::vector<RealMap> samples{oracle::random_map(8, 8, rng)};
    RealMap y = gaussian_label(8, 8, 1.0);
    AdmmConfig cfg;
    cfg.iters = 80;
    cfg.lambda = 1e-12;
    FilterState a = train_on(samples, {1.0}, y, 4, 4, cfg);

    RealMap y2 = y;
    for (auto& v : y2.values) v *= 3.0;
    FilterState b = train_on(samples, {1.0}, y2, 4, 4, cfg);

    ResponseMap ra = correlate_conj(a.h_spec, dft2(samples[0]));
    ResponseMap rb = correlate_conj(b.h_spec, dft2(samples[0]));
    for (std::size_t i = 0; i < ra.values.values.size(); ++i)
        CHECK(rb.values.values[i] == doctest::Approx(3.0 * ra.values.values[i]).epsilon(1e-5));
}

TEST_CASE("training is deterministic") {
    std::mt19937 rng(11);
    std::vector<RealMap> samples{oracle::random_map(8, 8, rng), oracle::random_map(8, 8, rng)};
    RealMap y = gaussian_label(8, 8, 1.0);
    AdmmConfig cfg;
    FilterState a = train_on(samples, {0.6, 0.4}, y, 4, 4, cfg);
    FilterState b = train_on(samples, {0.6, 0.4}, y, 4, 4, cfg);
    CHECK(a.h_spec.values == b.h_spec.values);
    for (std::size_t d = 0; d < a.w.size(); ++d) CHECK(a.w[d].values == b.w[d].values);
}

TEST_CASE("train_filter rejects an empty set") {
    TrainingSet set(5);
    AdmmConfig cfg;
    CHECK_THROWS(train_filter(set, dft2(gaussian_label(8, 8, 1.0)), 4, 4, cfg));
}
