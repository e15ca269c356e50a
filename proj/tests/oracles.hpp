// Test-only reference implementations, deliberately independent of the
// library's FFT/ADMM/QP code paths.
#ifndef TSD_TESTS_ORACLES_HPP_
#define TSD_TESTS_ORACLES_HPP_

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "tsd/signal.hpp"

namespace tsd::oracle {

// Direct O(n^4) 2-D DFT.
inline std::vector<std::complex<double>> dft2_direct(const RealMap& m) {
    const int H = m.height, W = m.width;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(H) * W);
    for (int k = 0; k < H; ++k)
        for (int l = 0; l < W; ++l) {
            std::complex<double> acc(0.0, 0.0);
            for (int r = 0; r < H; ++r)
                for (int c = 0; c < W; ++c) {
                    const double phase =
                        -2.0 * M_PI * (static_cast<double>(k) * r / H + static_cast<double>(l) * c / W);
                    acc += m.at(r, c) * std::complex<double>(std::cos(phase), std::sin(phase));
                }
            out[static_cast<std::size_t>(k) * W + l] = acc;
        }
    return out;
}

// Cyclic cross-correlation c_j = sum_n h_n x_{n+j}, computed spatially.
inline RealMap correlate_direct(const RealMap& h, const RealMap& x) {
    RealMap out(h.height, h.width);
    for (int jr = 0; jr < h.height; ++jr)
        for (int jc = 0; jc < h.width; ++jc) {
            double acc = 0.0;
            for (int r = 0; r < h.height; ++r)
                for (int c = 0; c < h.width; ++c)
                    acc += h.at(r, c) * x.at((r + jr) % h.height, (c + jc) % h.width);
            out.at(jr, jc) = acc;
        }
    return out;
}

// Dense constrained least squares for the single-channel training objective:
// minimize sum_f a_f ||y - C(x_f) P w||^2 + (lambda/2) ||w||^2 over the
// M-supported filter w. Returns the supported filter embedded at the
// centered position of an H x W map.
inline RealMap dense_supported_filter(const std::vector<RealMap>& samples,
                                      const std::vector<double>& alphas, const RealMap& y,
                                      int mh, int mw, double lambda) {
    const int H = y.height, W = y.width;
    const int n = mh * mw;
    const int r0 = (H - mh) / 2, c0 = (W - mw) / 2;
    // Normal equations A w = b with A = sum_f a_f G_f^T G_f + (lambda/2) I,
    // where G_f maps supported filter taps to the cyclic correlation response.
    std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0), b(n, 0.0);
    for (std::size_t f = 0; f < samples.size(); ++f) {
        const RealMap& x = samples[f];
        // G columns: column (i) = response of unit tap i.
        std::vector<double> G(static_cast<std::size_t>(H) * W * n);
        for (int ti = 0; ti < mh; ++ti)
            for (int tj = 0; tj < mw; ++tj) {
                const int col = ti * mw + tj;
                const int hr = r0 + ti, hc = c0 + tj;
                for (int jr = 0; jr < H; ++jr)
                    for (int jc = 0; jc < W; ++jc)
                        G[(static_cast<std::size_t>(jr) * W + jc) * n + col] =
                            x.at((hr + jr) % H, (hc + jc) % W);
            }
        for (int row = 0; row < H * W; ++row) {
            const double* g = &G[static_cast<std::size_t>(row) * n];
            const double yv = y.values[row];
            for (int i = 0; i < n; ++i) {
                b[i] += alphas[f] * g[i] * yv;
                for (int j = 0; j < n; ++j)
                    A[static_cast<std::size_t>(i) * n + j] += alphas[f] * g[i] * g[j];
            }
        }
    }
    for (int i = 0; i < n; ++i) A[static_cast<std::size_t>(i) * n + i] += lambda / 2.0;

    // Gaussian elimination with partial pivoting.
    std::vector<double> w(n, 0.0);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[static_cast<std::size_t>(r) * n + col]) >
                std::abs(A[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(A[static_cast<std::size_t>(col) * n + c],
                          A[static_cast<std::size_t>(piv) * n + c]);
            std::swap(b[col], b[piv]);
        }
        const double d = A[static_cast<std::size_t>(col) * n + col];
        if (std::abs(d) < 1e-300) throw std::runtime_error("oracle: singular system");
        for (int r = col + 1; r < n; ++r) {
            const double m = A[static_cast<std::size_t>(r) * n + col] / d;
            if (m == 0.0) continue;
            for (int c = col; c < n; ++c)
                A[static_cast<std::size_t>(r) * n + c] -= m * A[static_cast<std::size_t>(col) * n + c];
            b[r] -= m * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= A[static_cast<std::size_t>(r) * n + c] * w[c];
        w[r] = acc / A[static_cast<std::size_t>(r) * n + r];
    }

    RealMap out(H, W);
    for (int ti = 0; ti < mh; ++ti)
        for (int tj = 0; tj < mw; ++tj) out.at(r0 + ti, c0 + tj) = w[ti * mw + tj];
    return out;
}

// Objective of the same problem evaluated spatially.
inline double dense_objective(const RealMap& h_full, const std::vector<RealMap>& samples,
                              const std::vector<double>& alphas, const RealMap& y,
                              double lambda) {
    double obj = 0.0;
    for (std::size_t f = 0; f < samples.size(); ++f) {
        const RealMap r = correlate_direct(h_full, samples[f]);
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            const double d = y.values[i] - r.values[i];
            obj += alphas[f] * d * d;
        }
    }
    double reg = 0.0;
    for (double v : h_full.values) reg += v * v;
    return obj + lambda / 2.0 * reg;
}

// Exhaustive grid search over the probability simplex (F = 2 or 3).
inline std::vector<double> simplex_grid_search(const std::vector<double>& betas,
                                               const std::vector<double>& cs, double step) {
    const std::size_t n = betas.size();
    auto objective = [&](const std::vector<double>& a) {
        double o = 0.0;
        for (std::size_t i = 0; i < n; ++i) o += betas[i] * a[i] + cs[i] * a[i] * a[i];
        return o;
    };
    std::vector<double> best;
    double best_obj = 0.0;
    const int steps = static_cast<int>(std::lround(1.0 / step));
    if (n == 2) {
        for (int i = 0; i <= steps; ++i) {
            const std::vector<double> a{i * step, 1.0 - i * step};
            const double o = objective(a);
            if (best.empty() || o < best_obj) {
                best = a;
                best_obj = o;
            }
        }
    } else if (n == 3) {
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps - i; ++j) {
                const std::vector<double> a{i * step, j * step, 1.0 - (i + j) * step};
                const double o = objective(a);
                if (best.empty() || o < best_obj) {
                    best = a;
                    best_obj = o;
                }
            }
    } else {
        throw std::invalid_argument("grid search supports F in {2,3}");
    }
    return best;
}

inline RealMap random_map(int h, int w, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    RealMap m(h, w);
    for (auto& v : m.values) v = dist(rng);
    return m;
}

} // namespace tsd::oracle

#endif
