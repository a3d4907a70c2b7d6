// config.hpp — key-value/section config files with named parameter blocks,
// includes, and ordinary-frequency units (kHz/MHz) converted to rad/s
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msgate/params.hpp"

namespace msgate {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigSection {
    std::string kind;  // "gate" | "sweep" | ...
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;  // in file order

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return v;
        return std::nullopt;
    }
};

struct ConfigFile {
    std::vector<ConfigSection> sections;

    const ConfigSection* find(const std::string& kind,
                              const std::string& name) const {
        for (const auto& s : sections)
            if (s.kind == kind && s.name == name) return &s;
        return nullptr;
    }
    const ConfigSection* first_of(const std::string& kind) const {
        for (const auto& s : sections)
            if (s.kind == kind) return &s;
        return nullptr;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline void parse_config_stream(std::istream& is,
                                const std::filesystem::path& dir,
                                const std::string& where, ConfigFile& out,
                                int depth);

inline void parse_config_path(const std::filesystem::path& path,
                              ConfigFile& out, int depth) {
    if (depth > 8) throw ConfigError("config include depth exceeded");
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    parse_config_stream(f, path.parent_path(), path.string(), out, depth);
}

inline void parse_config_stream(std::istream& is,
                                const std::filesystem::path& dir,
                                const std::string& where, ConfigFile& out,
                                int depth) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto fail = [&](const std::string& msg) {
            throw ConfigError(where + ":" + std::to_string(lineno) + ": " + msg);
        };

        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            std::istringstream hdr(line.substr(1, line.size() - 2));
            ConfigSection sec;
            hdr >> sec.kind >> sec.name;
            if (sec.kind.empty()) fail("empty section header");
            out.sections.push_back(std::move(sec));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("empty key");

        if (key == "include") {
            std::filesystem::path inc(value);
            if (inc.is_relative()) inc = dir / inc;
            parse_config_path(inc, out, depth + 1);
            continue;
        }
        if (out.sections.empty()) fail("entry before any [section] header");
        out.sections.back().entries.emplace_back(key, value);
    }
}

inline double parse_number(const std::string& s, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("value '" + s + "' for key '" + key +
                          "' is not a number");
    }
    if (trim(s.substr(used)) != "")
        throw ConfigError("trailing junk after number in '" + s + "' (key '" +
                          key + "')");
    return v;
}

}  // namespace detail

inline ConfigFile parse_config_file(const std::filesystem::path& path) {
    ConfigFile out;
    detail::parse_config_path(path, out, 0);
    return out;
}

inline ConfigFile parse_config_text(const std::string& text) {
    ConfigFile out;
    std::istringstream ss(text);
    detail::parse_config_stream(ss, ".", "<string>", out, 0);
    return out;
}

// Search order for config paths: as given, then $MSGATE_CONFIG_DIR.
inline std::filesystem::path resolve_config_path(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return arg;
    if (const char* dir = std::getenv("MSGATE_CONFIG_DIR")) {
        const fs::path candidate = fs::path(dir) / arg;
        if (fs::exists(candidate)) return candidate;
    }
    throw ConfigError("config file not found: " + arg);
}

// Numeric parameter keys, config units on the left, rad/s or SI internally.
inline bool apply_gate_override(GateParams& p, const std::string& key,
                                const std::string& value) {
    auto num = [&] { return detail::parse_number(value, key); };
    if (key == "gate_rabi_khz") p.gate_rabi = khz_to_rad(num());
    else if (key == "loops") p.loops = int(num());
    else if (key == "detuning_khz") p.detuning = khz_to_rad(num());
    else if (key == "duration_us") p.duration = us_to_s(num());
    else if (key == "mode_freq_mhz") p.mode_freq = mhz_to_rad(num());
    else if (key == "carrier_rabi_mhz") p.carrier_rabi = mhz_to_rad(num());
    else if (key == "qubit_freq_mhz") p.qubit_freq = mhz_to_rad(num());
    else if (key == "zeeman_khz") p.zeeman_shift = khz_to_rad(num());
    else if (key == "dd_rabi_khz") p.dd_rabi = khz_to_rad(num());
    else if (key == "walsh_order") p.walsh_order = int(num());
    else if (key == "dd_mode") p.dd_mode = dd_mode_from_name(value);
    else if (key == "ramp_us") p.ramp_time = us_to_s(num());
    else if (key == "flip_ramp_us") p.flip_ramp_time = us_to_s(num());
    else if (key == "fock_cutoff") p.fock_cutoff = int(num());
    else if (key == "motional_offset_khz") p.motional_offset = khz_to_rad(num());
    else if (key == "dd_drift_a1") p.dd_drift_a1 = num();
    else if (key == "dd_drift_a2") p.dd_drift_a2 = num();
    else if (key == "initial_nbar") p.initial_nbar = num();
    else return false;
    return true;
}

// Build GateParams from a [gate <name>] section. Closure is solved from
// (gate_rabi, loops) unless detuning/duration are given explicitly.
inline GateParams gate_from_section(const ConfigSection& sec) {
    GateParams p;
    bool explicit_closure = false;
    for (const auto& [key, value] : sec.entries) {
        if (key == "detuning_khz" || key == "duration_us")
            explicit_closure = true;
        if (!apply_gate_override(p, key, value))
            throw ConfigError("unknown gate parameter '" + key + "' in [gate " +
                              sec.name + "]");
    }
    if (!explicit_closure) {
        if (p.gate_rabi <= 0.0)
            throw ConfigError("[gate " + sec.name + "] needs gate_rabi_khz");
        apply_closure(p);
    }
    p.validate();
    return p;
}

inline GateParams builtin_preset(const std::string& name) {
    if (name == "fast-gate-n1") return fast_gate_preset(1);
    if (name == "fast-gate-n2") return fast_gate_preset(2);
    if (name == "slow-gate-dd") return slow_dd_gate_preset();
    throw ConfigError("unknown preset '" + name +
                      "' (built-ins: fast-gate-n1, fast-gate-n2, slow-gate-dd)");
}

}  // namespace msgate
