#pragma once

// Runtime configuration for the CLI: defaults, then a key=value config file,
// then IM_* environment variables, then command-line flags (applied by the
// CLI itself). Precedence: flags > environment > file > defaults.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

namespace im {

struct Config {
    int modulus = 5;
    std::size_t ceiling = 0;  // 0 = default (every program of <= 7 tokens)
    int verify_bound = 7;
    int distance_slack = 8;               // max_program_tokens = max endpoint + slack
    std::size_t max_explored = 2'000'000;  // search safety valve
    std::string catalog_path;              // empty = built-in base catalog

    static const char* env_prefix() { return "IM_"; }
};

namespace detail {
inline std::optional<std::string> env_value(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

inline void config_set(Config& c, const std::string& key, const std::string& value,
                       const std::string& where) {
    auto as_int = [&](int lo, int hi) {
        const int v = std::stoi(value);
        if (v < lo || v > hi)
            throw std::runtime_error(where + ": " + key + " out of range (" + value + ")");
        return v;
    };
    if (key == "modulus") c.modulus = as_int(2, 10);
    else if (key == "ceiling") c.ceiling = static_cast<std::size_t>(std::stoull(value));
    else if (key == "verify_bound") c.verify_bound = as_int(1, 12);
    else if (key == "distance_slack") c.distance_slack = as_int(0, 64);
    else if (key == "max_explored") c.max_explored = static_cast<std::size_t>(std::stoull(value));
    else if (key == "catalog") c.catalog_path = value;
    else throw std::runtime_error(where + ": unknown config key `" + key + "`");
}
}  // namespace detail

// Loads `key=value` lines; `#` starts a comment line.
inline void load_config_file(Config& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        const std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::size_t eq = line.find('=', start);
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(start, eq - start);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        std::string value = line.substr(eq + 1);
        const std::size_t vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos ? "" : value.substr(vs);
        detail::config_set(c, key, value, path + ":" + std::to_string(lineno));
    }
}

inline void load_config_env(Config& c) {
    const std::string p = Config::env_prefix();
    if (auto v = detail::env_value(p + "MODULUS")) detail::config_set(c, "modulus", *v, "env");
    if (auto v = detail::env_value(p + "CEILING")) detail::config_set(c, "ceiling", *v, "env");
    if (auto v = detail::env_value(p + "VERIFY_BOUND"))
        detail::config_set(c, "verify_bound", *v, "env");
    if (auto v = detail::env_value(p + "DISTANCE_SLACK"))
        detail::config_set(c, "distance_slack", *v, "env");
    if (auto v = detail::env_value(p + "MAX_EXPLORED"))
        detail::config_set(c, "max_explored", *v, "env");
    if (auto v = detail::env_value(p + "CATALOG")) detail::config_set(c, "catalog", *v, "env");
}

// defaults -> optional file (explicit path or IM_CONFIG) -> environment
inline Config load_config(const std::string& file_path = "") {
    Config c;
    std::string path = file_path;
    if (path.empty())
        if (auto v = detail::env_value(std::string(Config::env_prefix()) + "CONFIG")) path = *v;
    if (!path.empty()) load_config_file(c, path);
    load_config_env(c);
    return c;
}

}  // namespace im
