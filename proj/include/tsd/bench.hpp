#ifndef TSD_BENCH_HPP_
#define TSD_BENCH_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsd/config.hpp"
#include "tsd/features.hpp"
#include "tsd/geometry.hpp"
#include "tsd/tracker.hpp"

namespace tsd {

struct Sequence {
    std::string name;
    std::vector<std::string> frame_paths;
    std::vector<std::optional<BoundingBox>> groundtruth; // nullopt = absent target
    std::set<std::string> attributes;

    std::size_t length() const { return frame_paths.size(); }
};

// Layout: <dir>/img/0001.ppm... + <dir>/groundtruth.txt ("x,y,w,h" top-left,
// "NaN,NaN,NaN,NaN" marks absent targets) + optional <dir>/attributes.txt.
Sequence load_sequence(const std::string& dir);
std::vector<Sequence> load_dataset(const std::string& dir);

constexpr int kPrecisionThresholds = 51; // 0..50 px, step 1
constexpr int kSuccessThresholds = 21;   // IoU 0..1, step 0.05

struct EvalResult {
    std::vector<double> cle;  // per evaluated frame
    std::vector<double> iou;
    std::vector<double> precision_curve; // fraction with CLE <= threshold
    std::vector<double> success_curve;   // fraction with IoU > threshold
    double precision_at_20 = 0.0;
    double success_auc = 0.0;
    double fps = 0.0;
    int frames = 0;
};

EvalResult evaluate(const std::vector<BoundingBox>& pred,
                    const std::vector<std::optional<BoundingBox>>& gt);

struct SequenceRun {
    std::string name;
    std::vector<BoundingBox> boxes;
    std::vector<FrameReport> reports;
    EvalResult result;
    std::string error; // non-empty when the sequence failed
};

struct OpeOutcome {
    std::vector<SequenceRun> runs; // sorted by sequence name
    EvalResult aggregate;          // mean over successful sequences
};

// One-pass evaluation: init from frame-1 groundtruth, never reset. Sequence
// failures are isolated and recorded. jobs <= 1 runs serially.
OpeOutcome run_ope(const TrackerConfig& cfg, const std::vector<Sequence>& sequences,
                   int jobs = 1, const CnTable* cn_table = nullptr);

std::vector<Sequence> filter_by_attribute(const std::vector<Sequence>& sequences,
                                          const std::string& attribute);

// Result serialization.
void write_boxes(const std::vector<BoundingBox>& boxes, const std::string& path);
nlohmann::json summary_json(const OpeOutcome& outcome);
void write_curves_csv(const EvalResult& aggregate, const std::string& path);

} // namespace tsd

#endif
