#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsd/bench.hpp"
#include "tsd/config.hpp"
#include "tsd/synth.hpp"
#include "tsd/tracker.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// Bad user input (paths, formats, values). Everything else that escapes is an
// internal error and maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOpts {
    std::string config_path;
    std::string mode;
    bool no_discard = false;
    bool no_fusion = false;
    bool no_response_reg = false;
    int jobs = 1;
    std::uint32_t seed = 0;
    std::string out = "results";
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_mode = true) {
    cmd->add_option("--config", opts.config_path, "flat key = value config file");
    if (with_mode)
        cmd->add_option("--mode", opts.mode, "tracker mode: tsd | baseline")
            ->check(CLI::IsMember({"tsd", "baseline"}));
    cmd->add_flag("--no-discard", opts.no_discard, "keep low-score samples (FIFO eviction)");
    cmd->add_flag("--no-fusion", opts.no_fusion, "disable keyframe sample fusion");
    cmd->add_flag("--no-response-reg", opts.no_response_reg,
                  "disable response-quality regularization in sample scoring");
    cmd->add_option("--jobs", opts.jobs, "parallel sequence workers")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "seed recorded in the manifest");
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_flag("--verbose", opts.verbose, "per-frame progress on stderr");
}

// Resolution order: built-in defaults < config file < flags.
tsd::TrackerConfig resolve_config(const CommonOpts& opts) {
    tsd::TrackerConfig cfg;
    if (!opts.config_path.empty()) {
        try {
            tsd::apply_config_file(cfg, opts.config_path);
        } catch (const std::exception& ex) {
            throw UsageError(ex.what());
        }
    }
    if (!opts.mode.empty()) cfg.mode = opts.mode;
    if (opts.no_discard) cfg.discard = false;
    if (opts.no_fusion) cfg.fusion = false;
    if (opts.no_response_reg) cfg.response_reg = false;
    if (const char* env = std::getenv("TSD_CN_TABLE"); env && *env) cfg.cn_table = env;
    try {
        cfg.validate();
    } catch (const std::exception& ex) {
        throw UsageError(ex.what());
    }
    return cfg;
}

std::optional<tsd::CnTable> load_cn_table(const tsd::TrackerConfig& cfg) {
    if (cfg.feature != "cn") return std::nullopt;
    if (cfg.cn_table.empty())
        throw UsageError("cn features need a table: set cn_table or TSD_CN_TABLE");
    try {
        return tsd::CnTable::load(cfg.cn_table);
    } catch (const std::exception& ex) {
        throw UsageError(ex.what());
    }
}

void write_manifest(const std::string& command, const tsd::TrackerConfig& cfg,
                    const std::vector<std::string>& inputs, const CommonOpts& opts) {
    fs::create_directories(opts.out);
    json manifest = {
        {"command", command},
        {"version", kVersion},
        {"config", cfg.to_json()},
        {"inputs", inputs},
        {"out", opts.out},
        {"seed", opts.seed},
        {"jobs", opts.jobs},
        {"timestamp",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
    };
    std::ofstream f(fs::path(opts.out) / "manifest.json");
    if (!f) throw std::runtime_error("cannot write manifest in " + opts.out);
    f << manifest.dump(2) << "\n";
}

tsd::Sequence load_seq_or_usage(const std::string& dir) {
    try {
        return tsd::load_sequence(dir);
    } catch (const std::exception& ex) {
        throw UsageError(ex.what());
    }
}

tsd::OpeOutcome run_and_write(const tsd::TrackerConfig& cfg,
                              const std::vector<tsd::Sequence>& seqs, const CommonOpts& opts,
                              const tsd::CnTable* cn) {
    tsd::OpeOutcome out = tsd::run_ope(cfg, seqs, opts.jobs, cn);
    for (const auto& run : out.runs) {
        if (!run.error.empty()) {
            std::cerr << run.name << ": " << run.error << "\n";
            continue;
        }
        tsd::write_boxes(run.boxes, (fs::path(opts.out) / (run.name + ".txt")).string());
        if (opts.verbose)
            std::cerr << run.name << ": precision@20 " << run.result.precision_at_20
                      << ", AUC " << run.result.success_auc << "\n";
    }
    return out;
}

int cmd_track(const std::string& seq_dir, const CommonOpts& opts) {
    tsd::TrackerConfig cfg = resolve_config(opts);
    auto cn = load_cn_table(cfg);
    tsd::Sequence seq = load_seq_or_usage(seq_dir);
    write_manifest("track", cfg, {seq_dir}, opts);

    tsd::OpeOutcome out = run_and_write(cfg, {seq}, opts, cn ? &*cn : nullptr);
    const tsd::SequenceRun& run = out.runs[0];
    if (!run.error.empty()) throw std::runtime_error(run.error);

    std::ofstream reports(fs::path(opts.out) / "reports.jsonl");
    for (const auto& rep : run.reports) reports << rep.to_json().dump() << "\n";
    std::cout << json{{"sequence", run.name},
                      {"frames", run.result.frames},
                      {"precision_at_20", run.result.precision_at_20},
                      {"success_auc", run.result.success_auc}}
                     .dump(2)
              << "\n";
    return 0;
}

std::vector<tsd::Sequence> load_dataset_or_usage(const std::string& dir) {
    std::vector<tsd::Sequence> seqs;
    try {
        seqs = tsd::load_dataset(dir);
    } catch (const std::exception& ex) {
        throw UsageError(ex.what());
    }
    if (seqs.empty()) throw UsageError("empty dataset: " + dir);
    return seqs;
}

int cmd_bench(const std::string& dataset_dir, const CommonOpts& opts) {
    tsd::TrackerConfig cfg = resolve_config(opts);
    auto cn = load_cn_table(cfg);
    std::vector<tsd::Sequence> seqs = load_dataset_or_usage(dataset_dir);
    write_manifest("bench", cfg, {dataset_dir}, opts);

    tsd::OpeOutcome out = run_and_write(cfg, seqs, opts, cn ? &*cn : nullptr);
    {
        std::ofstream f(fs::path(opts.out) / "summary.json");
        f << tsd::summary_json(out).dump(2) << "\n";
    }
    tsd::write_curves_csv(out.aggregate, (fs::path(opts.out) / "curves.csv").string());
    std::cout << "precision@20 " << out.aggregate.precision_at_20 << ", AUC "
              << out.aggregate.success_auc << " over " << seqs.size() << " sequences\n";
    return 0;
}

int cmd_ablate(const std::string& dataset_dir, const CommonOpts& opts) {
    tsd::TrackerConfig cfg = resolve_config(opts);
    auto cn = load_cn_table(cfg);
    std::vector<tsd::Sequence> seqs = load_dataset_or_usage(dataset_dir);
    write_manifest("ablate", cfg, {dataset_dir}, opts);

    struct Row {
        const char* name;
        std::string mode;
        bool discard, fusion, response_reg;
    };
    // Cumulative build-up from the plain fixed-rate tracker to the full method.
    const Row rows[] = {
        {"baseline", "baseline", false, false, false},
        {"+discard", "tsd", true, false, false},
        {"+fusion", "tsd", true, true, false},
        {"+response_reg", "tsd", true, true, true},
    };

    std::ofstream csv(fs::path(opts.out) / "ablation.csv");
    csv << "configuration,precision_at_20,success_auc,rel_imp\n";
    double prev_precision = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        tsd::TrackerConfig row_cfg = cfg;
        row_cfg.mode = rows[i].mode;
        row_cfg.discard = rows[i].discard;
        row_cfg.fusion = rows[i].fusion;
        row_cfg.response_reg = rows[i].response_reg;
        tsd::OpeOutcome out = tsd::run_ope(row_cfg, seqs, opts.jobs, cn ? &*cn : nullptr);
        const double p = out.aggregate.precision_at_20;
        char line[160];
        if (i == 0) {
            std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,-\n", rows[i].name, p,
                          out.aggregate.success_auc);
        } else {
            const double rel = prev_precision > 0.0 ? (p - prev_precision) / prev_precision : 0.0;
            std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,%.4f\n", rows[i].name, p,
                          out.aggregate.success_auc, rel);
        }
        csv << line;
        if (opts.verbose) std::cerr << line;
        prev_precision = p;
    }
    std::cout << "ablation table written to " << (fs::path(opts.out) / "ablation.csv").string()
              << "\n";
    return 0;
}

int cmd_synth(const tsd::SynthSpec& spec, const std::string& occlude, const CommonOpts& opts) {
    tsd::SynthSpec resolved = spec;
    resolved.seed = opts.seed;
    if (!occlude.empty()) {
        const auto colon = occlude.find(':');
        if (colon == std::string::npos) throw UsageError("--occlude expects START:END");
        try {
            resolved.occlusions.emplace_back(std::stoi(occlude.substr(0, colon)),
                                             std::stoi(occlude.substr(colon + 1)));
        } catch (const std::exception&) {
            throw UsageError("--occlude expects integer frame numbers");
        }
    }
    std::string dir;
    try {
        dir = tsd::synth_sequence(resolved, opts.out);
    } catch (const std::invalid_argument& ex) {
        throw UsageError(ex.what());
    }
    std::cout << dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation-filter tracker with training-set distillation"};
    app.require_subcommand(1);

    CommonOpts track_opts, bench_opts, ablate_opts, synth_opts;
    std::string seq_dir, bench_dataset, ablate_dataset, occlude;
    tsd::SynthSpec spec;

    CLI::App* track = app.add_subcommand("track", "track one sequence");
    track->add_option("--seq", seq_dir, "sequence directory")->required();
    add_common(track, track_opts);

    CLI::App* bench = app.add_subcommand("bench", "one-pass evaluation over a dataset");
    bench->add_option("--dataset", bench_dataset, "directory of sequence subdirectories")
        ->required();
    add_common(bench, bench_opts);

    CLI::App* ablate = app.add_subcommand("ablate", "cumulative component ablation");
    ablate->add_option("--dataset", ablate_dataset, "directory of sequence subdirectories")
        ->required();
    add_common(ablate, ablate_opts);

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic sequence");
    synth->add_option("--name", spec.name, "sequence name");
    synth->add_option("--frames", spec.frames, "frame count")->check(CLI::PositiveNumber);
    synth->add_option("--height", spec.frame_height, "frame height");
    synth->add_option("--width", spec.frame_width, "frame width");
    synth->add_option("--target-size", spec.target_height, "target side length");
    synth->add_option("--vx", spec.vx, "horizontal velocity, px/frame");
    synth->add_option("--vy", spec.vy, "vertical velocity, px/frame");
    synth->add_option("--size-decay", spec.size_decay, "per-frame target size factor");
    synth->add_option("--noise", spec.noise_level, "pixel noise level");
    synth->add_option("--occlude", occlude, "full-occlusion interval START:END, 1-based");
    synth->add_flag("--rgb", spec.rgb, "write RGB frames");
    add_common(synth, synth_opts, /*with_mode=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 returns 0 for --help; anything else is a usage error
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (track->parsed()) return cmd_track(seq_dir, track_opts);
        if (bench->parsed()) return cmd_bench(bench_dataset, bench_opts);
        if (ablate->parsed()) return cmd_ablate(ablate_dataset, ablate_opts);
        spec.target_width = spec.target_height;
        return cmd_synth(spec, occlude, synth_opts);
    } catch (const UsageError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 1;
    }
}
