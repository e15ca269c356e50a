#include "tsd/training_set.hpp"

#include <stdexcept>

namespace tsd {

ScoredSample make_sample(FeatureMap features, double dpmr, int frame_index) {
    ScoredSample s;
    s.spectrum = dft2(features.channels);
    s.features = std::move(features);
    s.dpmr = dpmr;
    s.frame_index = frame_index;
    return s;
}

TrainingSet::TrainingSet(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("TrainingSet: capacity must be >= 1");
}

void TrainingSet::push_sample(ScoredSample sample, bool fifo_discard) {
    if (!samples_.empty()) {
        const auto& ref = samples_.front();
        if (sample.features.height() != ref.features.height() ||
            sample.features.width() != ref.features.width() ||
            sample.features.channel_count() != ref.features.channel_count())
            throw std::invalid_argument("push_sample: sample dimension mismatch");
    }
    if (static_cast<int>(samples_.size()) == capacity_) {
        std::size_t victim = 0;
        if (!fifo_discard) {
            for (std::size_t i = 1; i < samples_.size(); ++i)
                if (samples_[i].score < samples_[victim].score) victim = i;
        }
        samples_.erase(samples_.begin() + static_cast<std::ptrdiff_t>(victim));
        ++discard_count_;
    }
    sample.is_key = false;
    sample.score = 1.0 / (samples_.size() + 1);
    samples_.push_back(std::move(sample));
    renormalize();
}

ScoredSample TrainingSet::fuse_key_sample() const {
    if (samples_.empty()) throw std::invalid_argument("fuse_key_sample: empty set");
    ScoredSample key;
    key.features.cell_size = samples_.front().features.cell_size;
    key.features.channels.assign(samples_.front().features.channel_count(),
                                 RealMap(samples_.front().features.height(),
                                         samples_.front().features.width()));
    for (const auto& s : samples_)
        for (int d = 0; d < key.features.channel_count(); ++d)
            for (std::size_t i = 0; i < key.features.channels[d].values.size(); ++i)
                key.features.channels[d].values[i] += s.score * s.features.channels[d].values[i];
    key.spectrum = dft2(key.features.channels);
    key.is_key = true;
    key.score = 1.0;
    return key;
}

void TrainingSet::establish_slot(int keyframe_frame_index, double keyframe_dpmr) {
    if (samples_.empty()) throw std::invalid_argument("establish_slot: empty set");
    ScoredSample key = fuse_key_sample();
    key.frame_index = keyframe_frame_index;
    key.dpmr = keyframe_dpmr;
    samples_.clear();
    samples_.push_back(std::move(key));
    ++slot_index_;
    keyframe_index_ = keyframe_frame_index;
}

void TrainingSet::set_scores(const std::vector<double>& alphas) {
    if (alphas.size() != samples_.size())
        throw std::invalid_argument("set_scores: score count mismatch");
    for (std::size_t i = 0; i < alphas.size(); ++i) samples_[i].score = alphas[i];
    renormalize();
}

void TrainingSet::renormalize() {
    double sum = 0.0;
    for (const auto& s : samples_) sum += s.score;
    if (sum <= 0.0) {
        const double uniform = 1.0 / samples_.size();
        for (auto& s : samples_) s.score = uniform;
        return;
    }
    for (auto& s : samples_) s.score /= sum;
}

} // namespace tsd
