#include "tsd/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsd {

namespace {
// Extra sweeps for the very first filter, before warm starts take over.
constexpr int kInitAdmmIters = 100;
} // namespace

nlohmann::json FrameReport::to_json() const {
    return {
        {"frame", frame},
        {"box", {box.left(), box.top(), box.w, box.h}},
        {"dpmr", dpmr},
        {"keyframe", keyframe},
        {"set_size", set_size},
        {"slot", slot_index},
        {"peak", peak_value},
        {"scale_index", scale_index},
        {"scores", scores},
        {"betas", betas},
        {"sample_frames", sample_frames},
    };
}

int estimate_scale(const std::vector<double>& scores, double penalty) {
    if (scores.empty()) throw std::invalid_argument("estimate_scale: no scores");
    const int center = static_cast<int>(scores.size()) / 2;
    int best = center;
    double best_score = scores[center];
    // Visit indices in order of distance from unity so strict comparison keeps
    // the unity scale on ties.
    for (int d = 1; d <= center; ++d) {
        for (int idx : {center - d, center + d}) {
            if (idx < 0 || idx >= static_cast<int>(scores.size())) continue;
            const double score = scores[idx] * std::pow(penalty, d);
            if (score > best_score) {
                best_score = score;
                best = idx;
            }
        }
    }
    return best;
}

int estimate_scale(const std::vector<ResponseMap>& responses, double penalty) {
    std::vector<double> scores;
    scores.reserve(responses.size());
    for (const auto& r : responses) scores.push_back(r.peak_value);
    return estimate_scale(scores, penalty);
}

Tracker::Tracker(const TrackerConfig& cfg, const CnTable* cn_table)
    : cfg_(cfg),
      mode_(parse_mode(cfg.mode)),
      feature_kind_(parse_feature_kind(cfg.feature)),
      cn_table_(cn_table),
      set_(cfg.f_max) {
    cfg_.validate();
    if (feature_kind_ == FeatureKind::kCn && cn_table_ == nullptr)
        throw std::invalid_argument("Tracker: cn features require a CN table");
}

FeatureMap Tracker::features_at(const Image& frame, const BoundingBox& box,
                                double scale) const {
    BoundingBox scaled = box;
    scaled.w *= scale;
    scaled.h *= scale;
    Image patch = extract_patch(frame, scaled, cfg_.padded_scale, model_px_, model_px_);
    return extract_features(patch, feature_kind_, cfg_.cell_size, cn_table_);
}

void Tracker::init(const Image& frame, const BoundingBox& box) {
    if (!box.valid()) throw std::invalid_argument("Tracker::init: zero-area box");
    frame_height_ = frame.height;
    frame_width_ = frame.width;
    box_ = box;
    box_.cx = std::clamp(box_.cx, 0.0, static_cast<double>(frame.width - 1));
    box_.cy = std::clamp(box_.cy, 0.0, static_cast<double>(frame.height - 1));

    model_px_ = cfg_.model_cells * cfg_.cell_size;
    support_cells_ = std::max(1, static_cast<int>(std::lround(cfg_.model_cells / cfg_.padded_scale)));
    const double sigma = std::sqrt(static_cast<double>(support_cells_) * support_cells_) / 16.0 *
                         cfg_.label_sigma_factor;
    y_spec_ = dft2(gaussian_label(cfg_.model_cells, cfg_.model_cells, sigma));
    support_mask_spec_ =
        dft2(crop_pad(RealMap(support_cells_, support_cells_, 1.0), cfg_.model_cells,
                      cfg_.model_cells));

    frame_index_ = 1;
    set_ = TrainingSet(cfg_.f_max);
    // The first frame is a keyframe by definition; its sample gets a nominal
    // above-threshold quality since no response exists yet.
    ScoredSample first = make_sample(features_at(frame, box_, 1.0), cfg_.tr + 1.0, 1);
    if (mode_ == TrackerMode::kBaseline) baseline_model_ = first;
    set_.push_sample(first);

    AdmmConfig admm{cfg_.lambda, cfg_.mu0, cfg_.mu_scale, cfg_.mu_max,
                    std::max(cfg_.admm_iters, kInitAdmmIters), cfg_.alternations};
    filter_ = train_filter(set_, y_spec_, support_cells_, support_cells_, admm);
}

void Tracker::retrain_tsd(double frame_dpmr) {
    AdmmConfig admm{cfg_.lambda, cfg_.mu0, cfg_.mu_scale, cfg_.mu_max,
                    cfg_.admm_iters, cfg_.alternations};
    const double nu = cfg_.response_reg ? cfg_.nu : 0.0;
    for (int a = 0; a < cfg_.alternations; ++a) {
        // Scores first with the previous filter, then the filter with new scores.
        std::vector<double> betas, dpmrs;
        betas.reserve(set_.size());
        dpmrs.reserve(set_.size());
        for (const auto& s : set_.samples()) {
            betas.push_back(residual_energy(filter_.g_spec, s.spectrum, y_spec_));
            dpmrs.push_back(s.dpmr);
        }
        const TemporalWeights tw = temporal_weights(set_.size(), cfg_.f0, cfg_.q);
        set_.set_scores(solve_alpha(betas, tw, dpmrs, cfg_.gamma, nu).alphas);
        filter_ = train_filter(set_, y_spec_, support_cells_, support_cells_, admm, &filter_);
    }
    last_scores_.clear();
    last_betas_.clear();
    last_sample_frames_.clear();
    for (const auto& s : set_.samples()) {
        last_scores_.push_back(s.score);
        last_betas_.push_back(residual_energy(filter_.g_spec, s.spectrum, y_spec_));
        last_sample_frames_.push_back(s.frame_index);
    }
    if (cfg_.fusion && is_keyframe(frame_dpmr, cfg_.tr))
        set_.establish_slot(frame_index_, frame_dpmr);
}

void Tracker::retrain_baseline(ScoredSample&& sample) {
    // BACF-style update: fixed-rate linear interpolation of a single model
    // sample, no scoring.
    ScoredSample& model = *baseline_model_;
    const double lr = cfg_.baseline_lr;
    for (int d = 0; d < model.features.channel_count(); ++d)
        for (std::size_t i = 0; i < model.features.channels[d].values.size(); ++i)
            model.features.channels[d].values[i] =
                (1.0 - lr) * model.features.channels[d].values[i] +
                lr * sample.features.channels[d].values[i];
    model.spectrum = dft2(model.features.channels);
    model.frame_index = frame_index_;

    std::vector<const SpectrumMap*> spectra{&model.spectrum};
    std::vector<double> alphas{1.0};
    AdmmConfig admm{cfg_.lambda, cfg_.mu0, cfg_.mu_scale, cfg_.mu_max,
                    cfg_.admm_iters, cfg_.alternations};
    filter_ = train_filter_spectra(spectra, alphas, y_spec_, support_cells_, support_cells_,
                                   admm, &filter_);
}

FrameReport Tracker::make_report(double dpmr, bool keyframe, int scale_index,
                                 double peak) const {
    FrameReport rep;
    rep.frame = frame_index_;
    rep.box = box_;
    rep.dpmr = dpmr;
    rep.keyframe = keyframe;
    rep.set_size = set_.size();
    rep.slot_index = set_.slot_index();
    rep.peak_value = peak;
    rep.scale_index = scale_index;
    if (!last_scores_.empty()) {
        rep.scores = last_scores_;
        rep.betas = last_betas_;
        rep.sample_frames = last_sample_frames_;
    } else {
        for (const auto& s : set_.samples()) {
            rep.scores.push_back(s.score);
            rep.sample_frames.push_back(s.frame_index);
        }
    }
    return rep;
}

FrameReport Tracker::track_frame(const Image& frame) {
    if (!initialized()) throw std::logic_error("track_frame before init");
    ++frame_index_;

    const int center = cfg_.scale_count / 2;
    std::vector<ResponseMap> responses;
    responses.reserve(cfg_.scale_count);
    std::vector<double> factors;
    std::vector<double> scores;
    for (int i = 0; i < cfg_.scale_count; ++i) {
        const double s = std::pow(cfg_.scale_step, i - center);
        factors.push_back(s);
        FeatureMap feat = features_at(frame, box_, s);
        SpectrumMap z = dft2(feat.channels);
        responses.push_back(correlate_conj(filter_.h_spec, z));
        // Matched-filter normalization: divide the peak by the feature energy
        // under the filter support at the peak shift, so resampling artifacts
        // cannot inflate one scale's raw correlation over another.
        RealMap sq(feat.height(), feat.width());
        for (const auto& chan : feat.channels)
            for (std::size_t i = 0; i < sq.values.size(); ++i)
                sq.values[i] += chan.values[i] * chan.values[i];
        const ResponseMap energy = correlate(support_mask_spec_, dft2(sq));
        const ResponseMap& r = responses.back();
        const double e = energy.values.at(r.peak_row, r.peak_col);
        scores.push_back(r.peak_value / std::sqrt(std::max(e, 1e-300)));
    }
    const int best = estimate_scale(scores, cfg_.scale_penalty);
    ResponseMap& r = responses[best];

    // Wrap the peak to a signed shift and convert cells to frame pixels.
    int dr = r.peak_row, dc = r.peak_col;
    if (dr > r.values.height / 2) dr -= r.values.height;
    if (dc > r.values.width / 2) dc -= r.values.width;
    // Parabolic sub-cell refinement along each axis; whole-cell quantization
    // otherwise feeds a persistent offset back into the training samples.
    auto refine = [](double lo, double mid, double hi) {
        const double denom = lo - 2.0 * mid + hi;
        if (denom >= -1e-12) return 0.0;
        return std::clamp((lo - hi) / (2.0 * denom), -0.5, 0.5);
    };
    const int h = r.values.height, w = r.values.width;
    const int pr = r.peak_row, pc = r.peak_col;
    const double sub_r = refine(r.values.at((pr + h - 1) % h, pc), r.values.at(pr, pc),
                                r.values.at((pr + 1) % h, pc));
    const double sub_c = refine(r.values.at(pr, (pc + w - 1) % w), r.values.at(pr, pc),
                                r.values.at(pr, (pc + 1) % w));
    const double px_per_cell_x = box_.w * factors[best] * cfg_.padded_scale / cfg_.model_cells;
    const double px_per_cell_y = box_.h * factors[best] * cfg_.padded_scale / cfg_.model_cells;
    box_.cx = std::clamp(box_.cx + (dc + sub_c) * px_per_cell_x, 0.0, frame_width_ - 1.0);
    box_.cy = std::clamp(box_.cy + (dr + sub_r) * px_per_cell_y, 0.0, frame_height_ - 1.0);
    box_.w *= factors[best];
    box_.h *= factors[best];

    DpmrParams dp{cfg_.high_area_fraction, cfg_.epsilon, cfg_.tr};
    r.dpmr = compute_dpmr(r, dp);
    const bool keyframe = is_keyframe(r.dpmr, cfg_.tr);

    ScoredSample sample = make_sample(features_at(frame, box_, 1.0), r.dpmr, frame_index_);
    if (mode_ == TrackerMode::kTsd) {
        set_.push_sample(std::move(sample), /*fifo_discard=*/!cfg_.discard);
        retrain_tsd(r.dpmr);
    } else {
        retrain_baseline(std::move(sample));
    }

    return make_report(r.dpmr, keyframe, best, r.peak_value);
}

} // namespace tsd
