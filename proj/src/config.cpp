#include "tsd/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tsd {

TrackerMode parse_mode(const std::string& name) {
    if (name == "tsd") return TrackerMode::kTsd;
    if (name == "baseline") return TrackerMode::kBaseline;
    throw std::invalid_argument("unknown mode: " + name);
}

std::string mode_name(TrackerMode mode) {
    return mode == TrackerMode::kTsd ? "tsd" : "baseline";
}

void TrackerConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("config: ") + what);
    };
    require(lambda >= 0.0, "lambda must be >= 0");
    require(mu0 > 0.0, "mu0 must be > 0");
    require(mu_scale >= 1.0, "mu_scale must be >= 1");
    require(admm_iters >= 1, "admm_iters must be >= 1");
    require(alternations >= 1, "alternations must be >= 1");
    require(gamma >= 0.0, "gamma must be >= 0");
    require(nu >= 0.0, "nu must be >= 0");
    require(f0 >= 1, "f0 must be >= 1");
    require(q > 0.0 && q < 1.0, "q must be in (0,1)");
    require(high_area_fraction > 0.0 && high_area_fraction < 1.0,
            "high_area_fraction must be in (0,1)");
    require(epsilon > 0.0, "epsilon must be > 0");
    require(f_max >= 1, "f_max must be >= 1");
    require(cell_size >= 1, "cell_size must be >= 1");
    require(padded_scale >= 1.0, "padded_scale must be >= 1");
    require(label_sigma_factor > 0.0, "label_sigma_factor must be > 0");
    require(model_cells >= 4, "model_cells must be >= 4");
    require(scale_count >= 1 && scale_count % 2 == 1, "scale_count must be odd");
    require(scale_step >= 1.0, "scale_step must be >= 1");
    require(scale_penalty > 0.0 && scale_penalty <= 1.0, "scale_penalty must be in (0,1]");
    require(baseline_lr > 0.0 && baseline_lr <= 1.0, "baseline_lr must be in (0,1]");
    parse_mode(mode);
    if (feature != "gray" && feature != "cn")
        throw std::invalid_argument("config: feature must be gray or cn");
}

nlohmann::json TrackerConfig::to_json() const {
    return {
        {"lambda", lambda},
        {"mu0", mu0},
        {"mu_scale", mu_scale},
        {"mu_max", mu_max},
        {"admm_iters", admm_iters},
        {"alternations", alternations},
        {"gamma", gamma},
        {"nu", nu},
        {"f0", f0},
        {"q", q},
        {"tr", tr},
        {"high_area_fraction", high_area_fraction},
        {"epsilon", epsilon},
        {"f_max", f_max},
        {"feature", feature},
        {"cell_size", cell_size},
        {"padded_scale", padded_scale},
        {"label_sigma_factor", label_sigma_factor},
        {"model_cells", model_cells},
        {"cn_table", cn_table},
        {"scale_count", scale_count},
        {"scale_step", scale_step},
        {"scale_penalty", scale_penalty},
        {"mode", mode},
        {"discard", discard},
        {"fusion", fusion},
        {"response_reg", response_reg},
        {"baseline_lr", baseline_lr},
    };
}

namespace {

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw std::invalid_argument("config: bad boolean value '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void apply_config_entry(TrackerConfig& cfg, const std::string& key, const std::string& value) {
    static const std::map<std::string, std::function<void(TrackerConfig&, const std::string&)>>
        setters = {
            {"lambda", [](TrackerConfig& c, const std::string& v) { c.lambda = std::stod(v); }},
            {"mu0", [](TrackerConfig& c, const std::string& v) { c.mu0 = std::stod(v); }},
            {"mu_scale", [](TrackerConfig& c, const std::string& v) { c.mu_scale = std::stod(v); }},
            {"mu_max", [](TrackerConfig& c, const std::string& v) { c.mu_max = std::stod(v); }},
            {"admm_iters", [](TrackerConfig& c, const std::string& v) { c.admm_iters = std::stoi(v); }},
            {"alternations", [](TrackerConfig& c, const std::string& v) { c.alternations = std::stoi(v); }},
            {"gamma", [](TrackerConfig& c, const std::string& v) { c.gamma = std::stod(v); }},
            {"nu", [](TrackerConfig& c, const std::string& v) { c.nu = std::stod(v); }},
            {"f0", [](TrackerConfig& c, const std::string& v) { c.f0 = std::stoi(v); }},
            {"q", [](TrackerConfig& c, const std::string& v) { c.q = std::stod(v); }},
            {"tr", [](TrackerConfig& c, const std::string& v) { c.tr = std::stod(v); }},
            {"high_area_fraction",
             [](TrackerConfig& c, const std::string& v) { c.high_area_fraction = std::stod(v); }},
            {"epsilon", [](TrackerConfig& c, const std::string& v) { c.epsilon = std::stod(v); }},
            {"f_max", [](TrackerConfig& c, const std::string& v) { c.f_max = std::stoi(v); }},
            {"feature", [](TrackerConfig& c, const std::string& v) { c.feature = v; }},
            {"cell_size", [](TrackerConfig& c, const std::string& v) { c.cell_size = std::stoi(v); }},
            {"padded_scale",
             [](TrackerConfig& c, const std::string& v) { c.padded_scale = std::stod(v); }},
            {"label_sigma_factor",
             [](TrackerConfig& c, const std::string& v) { c.label_sigma_factor = std::stod(v); }},
            {"model_cells", [](TrackerConfig& c, const std::string& v) { c.model_cells = std::stoi(v); }},
            {"cn_table", [](TrackerConfig& c, const std::string& v) { c.cn_table = v; }},
            {"scale_count", [](TrackerConfig& c, const std::string& v) { c.scale_count = std::stoi(v); }},
            {"scale_step", [](TrackerConfig& c, const std::string& v) { c.scale_step = std::stod(v); }},
            {"scale_penalty",
             [](TrackerConfig& c, const std::string& v) { c.scale_penalty = std::stod(v); }},
            {"mode", [](TrackerConfig& c, const std::string& v) { c.mode = v; }},
            {"discard", [](TrackerConfig& c, const std::string& v) { c.discard = parse_bool(v); }},
            {"fusion", [](TrackerConfig& c, const std::string& v) { c.fusion = parse_bool(v); }},
            {"response_reg",
             [](TrackerConfig& c, const std::string& v) { c.response_reg = parse_bool(v); }},
            {"baseline_lr",
             [](TrackerConfig& c, const std::string& v) { c.baseline_lr = std::stod(v); }},
        };
    auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    it->second(cfg, value);
}

void apply_config_file(TrackerConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

} // namespace tsd
