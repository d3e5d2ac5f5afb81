#pragma once

#include <map>
#include <string>

#include "iim/scenario.hpp"

namespace iim {

// Minimal TOML-style key/value configs: `key = value` lines, `#` comments,
// strings with or without quotes. See README for the key catalog.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string str(const std::string& key, const std::string& dflt = "") const;
    double num(const std::string& key, double dflt) const;
    int integer(const std::string& key, int dflt) const;
    bool flag(const std::string& key, bool dflt) const;

    const std::map<std::string, std::string>& items() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

// Builds a scenario from `preset` + `h` with optional overrides
// (mode, kappa0, eta, dt_factor, end_time, steady_tol, mfac, reynolds).
ScenarioConfig scenario_from_config(const Config& cfg);

} // namespace iim
