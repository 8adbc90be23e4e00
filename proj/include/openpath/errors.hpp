#pragma once

#include <stdexcept>
#include <string>

namespace openpath {

// Every domain failure the library can report. The pipeline maps these to
// per-droop status strings; nothing below ever escapes as a raw panic.
enum class errc {
    zero_input,
    non_positive_droop,
    degenerate_lattice,
    zero_discriminant,
    zero_vertical_speed,
    equal_potentials,
    no_resonance,
    channel_order,
    grazing_scan,
    degenerate_frequency,
    singular_system,
    rank_deficient,
    non_convergent,
    empty_data,
    config_error,
};

constexpr const char* errc_name(errc c) {
    switch (c) {
        case errc::zero_input: return "zero_input";
        case errc::non_positive_droop: return "non_positive_droop";
        case errc::degenerate_lattice: return "degenerate_lattice";
        case errc::zero_discriminant: return "zero_discriminant";
        case errc::zero_vertical_speed: return "zero_vertical_speed";
        case errc::equal_potentials: return "equal_potentials";
        case errc::no_resonance: return "no_resonance";
        case errc::channel_order: return "channel_order";
        case errc::grazing_scan: return "grazing_scan";
        case errc::degenerate_frequency: return "degenerate_frequency";
        case errc::singular_system: return "singular_system";
        case errc::rank_deficient: return "rank_deficient";
        case errc::non_convergent: return "non_convergent";
        case errc::empty_data: return "empty_data";
        case errc::config_error: return "config_error";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw error(code, what);
}

} // namespace openpath
