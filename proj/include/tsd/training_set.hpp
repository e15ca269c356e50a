#ifndef TSD_TRAINING_SET_HPP_
#define TSD_TRAINING_SET_HPP_

#include <vector>

#include "tsd/features.hpp"
#include "tsd/signal.hpp"

namespace tsd {

struct ScoredSample {
    FeatureMap features;
    SpectrumMap spectrum; // dft2(features), kept in sync
    double score = 0.0;
    double dpmr = 0.0; // response quality at acquisition
    int frame_index = 0;
    bool is_key = false;
};

ScoredSample make_sample(FeatureMap features, double dpmr, int frame_index);

// Capacity-bounded ordered store (oldest first) with time-slot lifecycle.
// Scores sum to 1 after every public operation.
class TrainingSet {
public:
    explicit TrainingSet(int capacity);

    // Appends a sample; at capacity the lowest-score element is removed first
    // (oldest wins ties). When fifo_discard is set the oldest element is
    // removed instead, regardless of score.
    void push_sample(ScoredSample sample, bool fifo_discard = false);

    // Score-weighted sum of all sample features.
    ScoredSample fuse_key_sample() const;

    // Fuses the current samples (the keyframe sample must already be pushed)
    // into one key-sample and restarts the slot with it.
    void establish_slot(int keyframe_frame_index, double keyframe_dpmr);

    void set_scores(const std::vector<double>& alphas);

    int size() const { return static_cast<int>(samples_.size()); }
    bool empty() const { return samples_.empty(); }
    int capacity() const { return capacity_; }
    int slot_index() const { return slot_index_; }
    int keyframe_index() const { return keyframe_index_; }
    int discard_count() const { return discard_count_; }
    const std::vector<ScoredSample>& samples() const { return samples_; }
    std::vector<ScoredSample>& samples() { return samples_; }

private:
    void renormalize();

    std::vector<ScoredSample> samples_;
    int capacity_;
    int slot_index_ = 1;
    int keyframe_index_ = 0;
    int discard_count_ = 0;
};

} // namespace tsd

#endif
