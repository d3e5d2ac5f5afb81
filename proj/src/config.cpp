#include "iim/config.hpp"

#include <fstream>
#include <sstream>

namespace iim {

namespace {
std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') continue; // section headers are decorative
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                                (val.front() == '\'' && val.back() == '\'')))
            val = val.substr(1, val.size() - 2);
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) +
                                           ": empty key");
        cfg.kv_[key] = val;
    }
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string Config::str(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double Config::num(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
        size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: " + it->second);
    }
}

int Config::integer(const std::string& key, int dflt) const {
    return static_cast<int>(num(key, dflt));
}

bool Config::flag(const std::string& key, bool dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "': not a boolean: " + it->second);
}

ScenarioConfig scenario_from_config(const Config& cfg) {
    const std::string preset = cfg.str("preset");
    if (preset.empty()) throw ConfigError("config: missing 'preset'");
    const double h = cfg.num("h", 0.0);
    if (h <= 0.0) throw ConfigError("config: missing or invalid 'h'");
    const CouplingMode mode =
        coupling_mode_from_string(cfg.str("coupling", "iim_full"));

    ScenarioConfig sc;
    if (preset == "cylinder") {
        sc = make_cylinder(cfg.num("reynolds", 40.0), h, mode);
    } else {
        sc = make_preset(preset, h, mode);
    }
    if (cfg.has("kappa0")) sc.penalty.kappa0 = cfg.num("kappa0", sc.penalty.kappa0);
    if (cfg.has("eta")) sc.penalty.eta = cfg.num("eta", sc.penalty.eta);
    if (cfg.has("dt_factor")) sc.dt_factor = cfg.num("dt_factor", sc.dt_factor);
    if (cfg.has("end_time")) sc.end_time = cfg.num("end_time", sc.end_time);
    if (cfg.has("steady_tol")) sc.steady_tol = cfg.num("steady_tol", sc.steady_tol);
    if (cfg.has("record_forces"))
        sc.record_forces = cfg.flag("record_forces", sc.record_forces);
    if (cfg.has("init_from_analytic"))
        sc.init_from_analytic = cfg.flag("init_from_analytic", sc.init_from_analytic);
    return sc;
}

} // namespace iim
