#include "tsd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tsd/image_io.hpp"

namespace tsd {

namespace fs = std::filesystem;

namespace {

std::optional<BoundingBox> parse_gt_line(const std::string& line) {
    std::istringstream ss(line);
    double v[4];
    char sep;
    for (int i = 0; i < 4; ++i) {
        std::string tok;
        if (i < 3) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("bad groundtruth line: " + line);
        } else {
            if (!std::getline(ss, tok)) throw std::runtime_error("bad groundtruth line: " + line);
        }
        std::istringstream ts(tok);
        if (!(ts >> v[i])) {
            // strtod accepts "NaN"; istream may not, so check explicitly
            std::string t = tok;
            t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
            if (t == "NaN" || t == "nan") {
                v[i] = std::nan("");
            } else {
                throw std::runtime_error("bad groundtruth value: " + tok);
            }
        }
    }
    (void)sep;
    if (std::isnan(v[0]) || std::isnan(v[1]) || std::isnan(v[2]) || std::isnan(v[3]))
        return std::nullopt;
    return BoundingBox::from_topleft(v[0], v[1], v[2], v[3]);
}

} // namespace

Sequence load_sequence(const std::string& dir) {
    Sequence seq;
    seq.name = fs::path(dir).filename().string();
    const fs::path img_dir = fs::path(dir) / "img";
    if (!fs::is_directory(img_dir))
        throw std::runtime_error("missing img/ directory in " + dir);
    for (const auto& entry : fs::directory_iterator(img_dir))
        if (entry.is_regular_file()) seq.frame_paths.push_back(entry.path().string());
    std::sort(seq.frame_paths.begin(), seq.frame_paths.end());
    if (seq.frame_paths.empty()) throw std::runtime_error("no frames in " + dir);

    const fs::path gt_path = fs::path(dir) / "groundtruth.txt";
    std::ifstream gt(gt_path);
    if (!gt) throw std::runtime_error("missing groundtruth: " + gt_path.string());
    std::string line;
    while (std::getline(gt, line)) {
        if (line.empty()) continue;
        seq.groundtruth.push_back(parse_gt_line(line));
    }
    if (seq.groundtruth.size() != seq.frame_paths.size())
        throw std::runtime_error("frame/groundtruth count mismatch in " + dir + ": " +
                                 std::to_string(seq.frame_paths.size()) + " frames vs " +
                                 std::to_string(seq.groundtruth.size()) + " lines");

    std::ifstream attrs(fs::path(dir) / "attributes.txt");
    while (attrs && std::getline(attrs, line)) {
        line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
        if (!line.empty()) seq.attributes.insert(line);
    }
    return seq;
}

std::vector<Sequence> load_dataset(const std::string& dir) {
    std::vector<Sequence> out;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    std::vector<std::string> subdirs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_directory()) subdirs.push_back(entry.path().string());
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& sd : subdirs) out.push_back(load_sequence(sd));
    return out;
}

EvalResult evaluate(const std::vector<BoundingBox>& pred,
                    const std::vector<std::optional<BoundingBox>>& gt) {
    if (pred.size() != gt.size())
        throw std::invalid_argument("evaluate: prediction/groundtruth length mismatch");
    EvalResult res;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!gt[i]) continue; // absent target excluded from averaging
        res.cle.push_back(center_error(pred[i], *gt[i]));
        res.iou.push_back(iou(pred[i], *gt[i]));
    }
    res.frames = static_cast<int>(res.cle.size());
    res.precision_curve.assign(kPrecisionThresholds, 0.0);
    res.success_curve.assign(kSuccessThresholds, 0.0);
    if (res.frames > 0) {
        for (int t = 0; t < kPrecisionThresholds; ++t) {
            int hit = 0;
            for (double e : res.cle)
                if (e <= t) ++hit;
            res.precision_curve[t] = static_cast<double>(hit) / res.frames;
        }
        for (int t = 0; t < kSuccessThresholds; ++t) {
            const double thr = t * 0.05;
            int hit = 0;
            for (double v : res.iou)
                if (v > thr) ++hit;
            res.success_curve[t] = static_cast<double>(hit) / res.frames;
        }
    }
    res.precision_at_20 = res.precision_curve[20];
    double auc = 0.0;
    for (int t = 0; t + 1 < kSuccessThresholds; ++t)
        auc += 0.5 * (res.success_curve[t] + res.success_curve[t + 1]) * 0.05;
    res.success_auc = auc;
    return res;
}

namespace {

SequenceRun run_one(const TrackerConfig& cfg, const Sequence& seq, const CnTable* cn) {
    SequenceRun run;
    run.name = seq.name;
    try {
        if (!seq.groundtruth[0])
            throw std::runtime_error("first frame has no groundtruth");
        Tracker tracker(cfg, cn);
        const auto t0 = std::chrono::steady_clock::now();
        Image first = read_image(seq.frame_paths[0]);
        tracker.init(first, *seq.groundtruth[0]);
        run.boxes.push_back(tracker.box());
        for (std::size_t i = 1; i < seq.length(); ++i) {
            Image frame = read_image(seq.frame_paths[i]);
            FrameReport rep = tracker.track_frame(frame);
            run.boxes.push_back(rep.box);
            run.reports.push_back(std::move(rep));
        }
        const auto t1 = std::chrono::steady_clock::now();
        run.result = evaluate(run.boxes, seq.groundtruth);
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        run.result.fps = secs > 0.0 ? seq.length() / secs : 0.0;
    } catch (const std::exception& ex) {
        run.error = ex.what();
    }
    return run;
}

} // namespace

OpeOutcome run_ope(const TrackerConfig& cfg, const std::vector<Sequence>& sequences,
                   int jobs, const CnTable* cn_table) {
    OpeOutcome out;
    out.runs.resize(sequences.size());
    if (jobs <= 1 || sequences.size() <= 1) {
        for (std::size_t i = 0; i < sequences.size(); ++i)
            out.runs[i] = run_one(cfg, sequences[i], cn_table);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= sequences.size()) return;
                out.runs[i] = run_one(cfg, sequences[i], cn_table);
            }
        };
        std::vector<std::thread> pool;
        const int n = std::min<int>(jobs, static_cast<int>(sequences.size()));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    // Merge order is by sequence name, independent of completion order.
    std::sort(out.runs.begin(), out.runs.end(),
              [](const SequenceRun& a, const SequenceRun& b) { return a.name < b.name; });

    EvalResult agg;
    agg.precision_curve.assign(kPrecisionThresholds, 0.0);
    agg.success_curve.assign(kSuccessThresholds, 0.0);
    int ok = 0;
    for (const auto& run : out.runs) {
        if (!run.error.empty()) continue;
        ++ok;
        for (int t = 0; t < kPrecisionThresholds; ++t)
            agg.precision_curve[t] += run.result.precision_curve[t];
        for (int t = 0; t < kSuccessThresholds; ++t)
            agg.success_curve[t] += run.result.success_curve[t];
        agg.precision_at_20 += run.result.precision_at_20;
        agg.success_auc += run.result.success_auc;
        agg.fps += run.result.fps;
        agg.frames += run.result.frames;
    }
    if (ok > 0) {
        for (auto& v : agg.precision_curve) v /= ok;
        for (auto& v : agg.success_curve) v /= ok;
        agg.precision_at_20 /= ok;
        agg.success_auc /= ok;
        agg.fps /= ok;
    }
    out.aggregate = std::move(agg);
    return out;
}

std::vector<Sequence> filter_by_attribute(const std::vector<Sequence>& sequences,
                                          const std::string& attribute) {
    std::vector<Sequence> out;
    for (const auto& s : sequences)
        if (s.attributes.count(attribute)) out.push_back(s);
    return out;
}

void write_boxes(const std::vector<BoundingBox>& boxes, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char line[128];
    for (const auto& b : boxes) {
        std::snprintf(line, sizeof(line), "%.2f,%.2f,%.2f,%.2f\n", b.left(), b.top(), b.w, b.h);
        out << line;
    }
}

nlohmann::json summary_json(const OpeOutcome& outcome) {
    nlohmann::json seqs = nlohmann::json::object();
    for (const auto& run : outcome.runs) {
        if (!run.error.empty()) {
            seqs[run.name] = {{"error", run.error}};
        } else {
            seqs[run.name] = {{"precision_at_20", run.result.precision_at_20},
                              {"success_auc", run.result.success_auc},
                              {"fps", run.result.fps},
                              {"frames", run.result.frames}};
        }
    }
    return {{"sequences", seqs},
            {"aggregate",
             {{"precision_at_20", outcome.aggregate.precision_at_20},
              {"success_auc", outcome.aggregate.success_auc},
              {"fps", outcome.aggregate.fps}}}};
}

void write_curves_csv(const EvalResult& aggregate, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "threshold,precision,iou_threshold,success\n";
    const int rows = std::max(kPrecisionThresholds, kSuccessThresholds);
    char line[128];
    for (int i = 0; i < rows; ++i) {
        std::string a, b, c, d;
        if (i < kPrecisionThresholds) {
            a = std::to_string(i);
            std::snprintf(line, sizeof(line), "%.6f", aggregate.precision_curve[i]);
            b = line;
        }
        if (i < kSuccessThresholds) {
            std::snprintf(line, sizeof(line), "%.2f", i * 0.05);
            c = line;
            std::snprintf(line, sizeof(line), "%.6f", aggregate.success_curve[i]);
            d = line;
        }
        out << a << "," << b << "," << c << "," << d << "\n";
    }
}

} // namespace tsd
