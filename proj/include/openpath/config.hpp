#pragma once

// Scenario configuration: a flat key = value file with dotted keys.
// Unknown keys are rejected; defaults are materialized on load so a report's
// config echo always shows the values that actually ran.

#include <array>
#include <complex>
#include <istream>
#include <set>
#include <sstream>
#include <string>

#include "openpath/balance.hpp"
#include "openpath/errors.hpp"

namespace openpath {

enum class PotentialMode { derive, explicit_pair };

struct ScenarioConfig {
    double k0 = 1.0;
    int grid = 200;
    double lambda = 1e-6;
    long long seed = 0;
    LinkFunction link = LinkFunction::identity;

    std::string series_f_path;
    std::string series_p_path;

    std::complex<double> omega1{0.0, 0.0};
    std::complex<double> omega2{0.0, 0.0};
    bool has_lattice = false;

    std::string wing_path;

    std::array<double, 4> quad_omega{};
    int quad_bound = 32;
    bool has_quad = false;

    PotentialMode potential_mode = PotentialMode::derive;
    double v_in = 0.0;
    double v_out = 0.0;

    ColorVector colors{};
    bool has_colors = false;
    double v0 = 0.0;

    std::string regression_path;
};

namespace detail {

inline std::string trim_cfg(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double cfg_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        raise(errc::config_error, "bad number '" + value + "' for key " + key);
    }
}

inline long long cfg_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        raise(errc::config_error, "bad integer '" + value + "' for key " + key);
    }
}

} // namespace detail

inline LinkFunction parse_link(const std::string& value) {
    if (value == "identity") return LinkFunction::identity;
    if (value == "log") return LinkFunction::log;
    raise(errc::config_error, "link must be identity or log, got '" + value + "'");
}

// Apply one key = value assignment. Shared by the file parser and the CLI
// override flags.
inline void config_set(ScenarioConfig& cfg, const std::string& key,
                       const std::string& value) {
    using detail::cfg_integer;
    using detail::cfg_number;
    if (key == "k0") {
        cfg.k0 = cfg_number(key, value);
    } else if (key == "grid") {
        cfg.grid = static_cast<int>(cfg_integer(key, value));
    } else if (key == "lambda") {
        cfg.lambda = cfg_number(key, value);
    } else if (key == "seed") {
        cfg.seed = cfg_integer(key, value);
    } else if (key == "link") {
        cfg.link = parse_link(value);
    } else if (key == "series.f") {
        cfg.series_f_path = value;
    } else if (key == "series.p") {
        cfg.series_p_path = value;
    } else if (key == "lattice.omega1.re") {
        cfg.omega1.real(cfg_number(key, value));
        cfg.has_lattice = true;
    } else if (key == "lattice.omega1.im") {
        cfg.omega1.imag(cfg_number(key, value));
        cfg.has_lattice = true;
    } else if (key == "lattice.omega2.re") {
        cfg.omega2.real(cfg_number(key, value));
        cfg.has_lattice = true;
    } else if (key == "lattice.omega2.im") {
        cfg.omega2.imag(cfg_number(key, value));
        cfg.has_lattice = true;
    } else if (key == "wing.path") {
        cfg.wing_path = value;
    } else if (key == "quad.omega1" || key == "quad.omega2" ||
               key == "quad.omega3" || key == "quad.omega4") {
        const int idx = key.back() - '1';
        cfg.quad_omega[idx] = cfg_number(key, value);
        cfg.has_quad = true;
    } else if (key == "quad.bound") {
        cfg.quad_bound = static_cast<int>(cfg_integer(key, value));
    } else if (key == "potentials.mode") {
        if (value == "derive") {
            cfg.potential_mode = PotentialMode::derive;
        } else if (value == "explicit") {
            cfg.potential_mode = PotentialMode::explicit_pair;
        } else {
            raise(errc::config_error,
                  "potentials.mode must be derive or explicit, got '" + value + "'");
        }
    } else if (key == "potentials.v_in") {
        cfg.v_in = cfg_number(key, value);
    } else if (key == "potentials.v_out") {
        cfg.v_out = cfg_number(key, value);
    } else if (key == "colors.c1" || key == "colors.c2" || key == "colors.c3" ||
               key == "colors.c4" || key == "colors.c5") {
        const int idx = key.back() - '1';
        cfg.colors.c[idx] = cfg_number(key, value);
        cfg.has_colors = true;
    } else if (key == "v0") {
        cfg.v0 = cfg_number(key, value);
    } else if (key == "regression.path") {
        cfg.regression_path = value;
    } else {
        raise(errc::config_error, "unknown configuration key '" + key + "'");
    }
}

// Parse a whole config stream. Lines are key = value; blank lines and lines
// starting with # are skipped.
inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim_cfg(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            raise(errc::config_error,
                  "line " + std::to_string(lineno) + " is not key = value");
        }
        const std::string key = detail::trim_cfg(t.substr(0, eq));
        const std::string value = detail::trim_cfg(t.substr(eq + 1));
        if (key.empty() || value.empty()) {
            raise(errc::config_error,
                  "line " + std::to_string(lineno) + " has an empty key or value");
        }
        config_set(cfg, key, value);
    }
    return cfg;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// Checks shared by every subcommand that reconstructs spectra.
inline void validate_reconstruction_params(const ScenarioConfig& cfg) {
    if (!(cfg.k0 > 0.0)) {
        raise(errc::config_error, "k0 must be positive");
    }
    if (cfg.grid < 16) {
        raise(errc::config_error, "grid must be >= 16");
    }
    if (cfg.lambda < 0.0) {
        raise(errc::config_error, "lambda must be >= 0");
    }
}

// Checks for a full prediction run.
inline void validate_for_predict(const ScenarioConfig& cfg) {
    validate_reconstruction_params(cfg);
    if (cfg.series_f_path.empty() || cfg.series_p_path.empty()) {
        raise(errc::config_error, "predict needs series.f and series.p paths");
    }
    if (!cfg.has_lattice) {
        raise(errc::config_error, "predict needs the lattice half-periods");
    }
    if (cfg.wing_path.empty()) {
        raise(errc::config_error, "predict needs wing.path");
    }
    if (!cfg.has_quad) {
        raise(errc::config_error, "predict needs the frequency quad");
    }
    if (cfg.quad_bound < 1) {
        raise(errc::config_error, "quad.bound must be >= 1");
    }
    if (cfg.potential_mode == PotentialMode::explicit_pair &&
        (!(cfg.v_in > 0.0) || !(cfg.v_out > 0.0))) {
        raise(errc::config_error, "explicit potentials must be positive");
    }
    if (!cfg.has_colors) {
        raise(errc::config_error, "predict needs colors.c1..c5");
    }
    if (!colors_valid(cfg.colors)) {
        raise(errc::config_error, "colours must lie in [0, 1)");
    }
    if (cfg.regression_path.empty()) {
        raise(errc::config_error, "predict needs regression.path");
    }
}

} // namespace openpath
