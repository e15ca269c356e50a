#include "tsd/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsd {

TemporalWeights temporal_weights(int count, int f0, double q) {
    if (count < 1) throw std::invalid_argument("temporal_weights: count must be >= 1");
    if (f0 < 1) throw std::invalid_argument("temporal_weights: f0 must be >= 1");
    if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("temporal_weights: q must be in (0,1)");

    TemporalWeights out;
    out.f0 = f0;
    out.q = q;
    out.t.resize(count);
    if (count >= f0) {
        const double a = (count - f0) + (std::pow(1.0 - q, -f0) - 1.0) / q;
        for (int f = 1; f <= count; ++f) {
            if (f <= count - f0)
                out.t[f - 1] = 1.0 / a;
            else
                out.t[f - 1] = std::pow(1.0 - q, count - f0 - f) / a;
        }
    } else {
        // The closed-form normalization constant assumes F >= f0; for a slot
        // still shorter than f0 the geometric branch is evaluated as-is and
        // renormalized.
        double sum = 0.0;
        for (int f = 1; f <= count; ++f) {
            out.t[f - 1] = std::pow(1.0 - q, count - f0 - f);
            sum += out.t[f - 1];
        }
        for (auto& v : out.t) v /= sum;
    }
    return out;
}

double compute_dpmr(const ResponseMap& r, const DpmrParams& p) {
    const RealMap& m = r.values;
    if (m.values.empty()) throw std::invalid_argument("compute_dpmr: empty response");
    if (p.high_area_fraction <= 0.0 || p.high_area_fraction >= 1.0)
        throw std::invalid_argument("compute_dpmr: high_area_fraction must be in (0,1)");

    const int wh = std::max(1, static_cast<int>(std::lround(p.high_area_fraction * m.height)));
    const int ww = std::max(1, static_cast<int>(std::lround(p.high_area_fraction * m.width)));
    const int r0 = r.peak_row - (wh - 1) / 2;
    const int c0 = r.peak_col - (ww - 1) / 2;

    std::vector<bool> in_high(m.size(), false);
    for (int i = 0; i < wh; ++i) {
        const int row = ((r0 + i) % m.height + m.height) % m.height;
        for (int j = 0; j < ww; ++j) {
            const int col = ((c0 + j) % m.width + m.width) % m.width;
            in_high[static_cast<std::size_t>(row) * m.width + col] = true;
        }
    }

    double high_max = -std::numeric_limits<double>::infinity();
    double high_min = std::numeric_limits<double>::infinity();
    double low_min = std::numeric_limits<double>::infinity();
    double low_sum = 0.0;
    std::size_t low_count = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double v = m.values[i];
        if (in_high[i]) {
            high_max = std::max(high_max, v);
            high_min = std::min(high_min, v);
        } else {
            low_min = std::min(low_min, v);
            low_sum += v;
            ++low_count;
        }
    }
    const double numer = high_max - high_min;
    double denom = p.epsilon;
    if (low_count > 0)
        denom = std::max(low_sum / low_count - low_min, p.epsilon);
    return numer / denom;
}

bool is_keyframe(double dpmr, double tr) {
    return dpmr > tr;
}

double residual_energy(const SpectrumMap& conj_filter, const SpectrumMap& sample_spec,
                       const SpectrumMap& y_spec) {
    if (conj_filter.channels != sample_spec.channels ||
        conj_filter.height != sample_spec.height || conj_filter.width != sample_spec.width ||
        y_spec.height != sample_spec.height || y_spec.width != sample_spec.width)
        throw std::invalid_argument("residual_energy: dimension mismatch");
    const std::size_t bins = sample_spec.bins();
    double energy = 0.0;
    const std::complex<double>* y = y_spec.channel(0);
    for (std::size_t u = 0; u < bins; ++u) {
        std::complex<double> resp(0.0, 0.0);
        for (int d = 0; d < sample_spec.channels; ++d)
            resp += conj_filter.channel(d)[u] * sample_spec.channel(d)[u];
        energy += std::norm(y[u] - resp);
    }
    return energy / static_cast<double>(bins);
}

ScoreVector solve_simplex_qp(const std::vector<double>& betas,
                             const std::vector<double>& quad_coeffs) {
    const std::size_t n = betas.size();
    if (n == 0) throw std::invalid_argument("solve_simplex_qp: empty problem");
    if (quad_coeffs.size() != n)
        throw std::invalid_argument("solve_simplex_qp: coefficient count mismatch");

    ScoreVector out;
    out.alphas.assign(n, 0.0);
    if (n == 1) {
        out.alphas[0] = 1.0;
        return out;
    }

    double cmax = 0.0;
    for (double c : quad_coeffs) cmax = std::max(cmax, c);
    if (cmax <= 0.0) {
        // Degenerate linear program: all mass on the smallest beta.
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (betas[i] < betas[best]) best = i;
        out.alphas[best] = 1.0;
        return out;
    }

    // Water-filling: alpha_i = (theta - beta_i) / (2 c_i) clipped at zero.
    // Start with all coordinates active and drop negatives until stable.
    std::vector<double> c(quad_coeffs);
    for (auto& v : c) v = std::max(v, cmax * 1e-15);
    std::vector<bool> active(n, true);
    for (std::size_t iter = 0; iter <= n; ++iter) {
        double inv_sum = 0.0, ratio_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (active[i]) {
                inv_sum += 1.0 / (2.0 * c[i]);
                ratio_sum += betas[i] / (2.0 * c[i]);
            }
        const double theta = (1.0 + ratio_sum) / inv_sum;
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i)
            if (active[i] && theta - betas[i] < 0.0) {
                active[i] = false;
                changed = true;
            }
        if (!changed) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (active[i]) {
                    out.alphas[i] = (theta - betas[i]) / (2.0 * c[i]);
                    sum += out.alphas[i];
                }
            // Exact constraint despite rounding.
            for (auto& a : out.alphas) a /= sum;
            return out;
        }
    }
    throw std::runtime_error("solve_simplex_qp: active set failed to converge");
}

ScoreVector solve_alpha(const std::vector<double>& betas, const TemporalWeights& t,
                        const std::vector<double>& dpmrs, double gamma, double nu,
                        double dpmr_guard) {
    const std::size_t n = betas.size();
    if (n == 0) throw std::invalid_argument("solve_alpha: empty training set");
    if (t.t.size() != n || dpmrs.size() != n)
        throw std::invalid_argument("solve_alpha: input length mismatch");
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = gamma / (2.0 * t.t[i]) + nu / (2.0 * std::max(dpmrs[i], dpmr_guard));
    return solve_simplex_qp(betas, c);
}

} // namespace tsd
