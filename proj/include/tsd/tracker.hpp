#ifndef TSD_TRACKER_HPP_
#define TSD_TRACKER_HPP_

#include <optional>
#include <vector>

#include "tsd/config.hpp"
#include "tsd/features.hpp"
#include "tsd/filter_solver.hpp"
#include "tsd/geometry.hpp"
#include "tsd/scoring.hpp"
#include "tsd/training_set.hpp"

namespace tsd {

struct FrameReport {
    int frame = 0;
    BoundingBox box;
    double dpmr = 0.0;
    bool keyframe = false;
    int set_size = 0;
    int slot_index = 0;
    double peak_value = 0.0;
    int scale_index = 0;
    std::vector<double> scores;       // per-sample alpha, set order
    std::vector<double> betas;        // per-sample residual energy, set order
    std::vector<int> sample_frames;   // frame index each sample was acquired at

    nlohmann::json to_json() const;
};

// Picks the scale whose penalized score is largest; exact ties go to the
// unity scale. Scores are ordered from smallest to largest scale.
int estimate_scale(const std::vector<double>& scores, double penalty);

// Convenience overload scoring each response by its raw peak value.
int estimate_scale(const std::vector<ResponseMap>& responses, double penalty);

class Tracker {
public:
    explicit Tracker(const TrackerConfig& cfg, const CnTable* cn_table = nullptr);

    void init(const Image& frame, const BoundingBox& box);
    FrameReport track_frame(const Image& frame);

    bool initialized() const { return frame_index_ > 0; }
    const BoundingBox& box() const { return box_; }
    const FilterState& filter() const { return filter_; }
    const TrainingSet& training_set() const { return set_; }
    const TrackerConfig& config() const { return cfg_; }

private:
    FeatureMap features_at(const Image& frame, const BoundingBox& box, double scale) const;
    void retrain_tsd(double frame_dpmr);
    void retrain_baseline(ScoredSample&& sample);
    FrameReport make_report(double dpmr, bool keyframe, int scale_index, double peak) const;

    TrackerConfig cfg_;
    TrackerMode mode_;
    FeatureKind feature_kind_;
    const CnTable* cn_table_;

    TrainingSet set_;
    FilterState filter_;
    SpectrumMap y_spec_;
    SpectrumMap support_mask_spec_; // indicator of the filter support window
    std::optional<ScoredSample> baseline_model_;

    // Post-QP score snapshot for reporting, taken before any keyframe fusion
    // collapses the set.
    std::vector<double> last_scores_;
    std::vector<double> last_betas_;
    std::vector<int> last_sample_frames_;

    BoundingBox box_;
    int frame_index_ = 0;
    int frame_height_ = 0;
    int frame_width_ = 0;
    int support_cells_ = 0;
    int model_px_ = 0;
};

} // namespace tsd

#endif
