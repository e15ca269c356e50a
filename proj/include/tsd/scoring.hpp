#ifndef TSD_SCORING_HPP_
#define TSD_SCORING_HPP_

#include <vector>

#include "tsd/signal.hpp"

namespace tsd {

// Per-sample scores on the unit simplex.
struct ScoreVector {
    std::vector<double> alphas;
};

// Recency weights t^f: flat for the older part of the slot, geometric toward
// the newest f0 frames, normalized to sum 1.
struct TemporalWeights {
    std::vector<double> t;
    int f0 = 10;
    double q = 0.0408;
};

struct DpmrParams {
    double high_area_fraction = 0.2;
    double epsilon = 1e-6;
    double tr = 14.0;
};

TemporalWeights temporal_weights(int count, int f0, double q);

// Dual-area peak to media ratio. The high area is the centered wrap-around
// window of high_area_fraction per axis around the peak; the rest is low.
double compute_dpmr(const ResponseMap& r, const DpmrParams& p);

bool is_keyframe(double dpmr, double tr);

// Spatial-domain data loss of one sample under the current filter, computed in
// the frequency domain with Parseval scaling. conj_filter is the stored
// conjugate-space g spectrum.
double residual_energy(const SpectrumMap& conj_filter, const SpectrumMap& sample_spec,
                       const SpectrumMap& y_spec);

// minimize sum_f beta^f a^f + c^f (a^f)^2 with c^f = gamma/(2 t^f) + nu/(2 dpmr^f),
// subject to sum a = 1, a >= 0. Exact active-set solution.
ScoreVector solve_alpha(const std::vector<double>& betas, const TemporalWeights& t,
                        const std::vector<double>& dpmrs, double gamma, double nu,
                        double dpmr_guard = 1e-6);

// Same QP with explicit quadratic coefficients; used by solve_alpha and tests.
ScoreVector solve_simplex_qp(const std::vector<double>& betas,
                             const std::vector<double>& quad_coeffs);

} // namespace tsd

#endif
