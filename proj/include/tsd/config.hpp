#ifndef TSD_CONFIG_HPP_
#define TSD_CONFIG_HPP_

#include <map>
#include <string>

#include "json.hpp"

namespace tsd {

enum class TrackerMode { kTsd, kBaseline };

TrackerMode parse_mode(const std::string& name);
std::string mode_name(TrackerMode mode);

// All tunables in one place. Defaults follow the reference hyperparameters:
// F_max=50, gamma=3.02, nu=0.201, f0=10, q=0.0408, tr=14, penalty scale 2.
struct TrackerConfig {
    // Filter solver
    double lambda = 0.01;
    double mu0 = 1.0;
    double mu_scale = 2.0;
    double mu_max = 1000.0;
    int admm_iters = 2;
    int alternations = 1;

    // Sample scoring
    double gamma = 3.02;
    double nu = 0.201;
    int f0 = 10;
    double q = 0.0408;
    double tr = 14.0;
    double high_area_fraction = 0.2;
    double epsilon = 1e-6;
    int f_max = 50;

    // Features / geometry
    std::string feature = "gray"; // gray | cn
    int cell_size = 4;
    double padded_scale = 4.0;
    double label_sigma_factor = 1.0;
    int model_cells = 48; // response map is model_cells x model_cells
    std::string cn_table; // path; TSD_CN_TABLE env var overrides when set

    // Scale search
    int scale_count = 5;
    double scale_step = 1.01;
    // applied per step away from unity, on energy-normalized peak scores
    double scale_penalty = 0.96;

    // Mode and ablation toggles
    std::string mode = "tsd"; // tsd | baseline
    bool discard = true;
    bool fusion = true;
    bool response_reg = true;
    double baseline_lr = 0.0125;

    void validate() const;
    nlohmann::json to_json() const;
};

// Flat "key = value" file, '#' comments. Unknown keys are hard errors so a
// typoed hyperparameter name cannot silently fall back to its default.
void apply_config_file(TrackerConfig& cfg, const std::string& path);
void apply_config_entry(TrackerConfig& cfg, const std::string& key, const std::string& value);

} // namespace tsd

#endif
