#pragma once

// Norming operator and path estimators.
//
// The norming [x]0 scales a positive value by a power of two into the
// half-open interval (pi/2, pi]. The intervals (pi*2^(n-1), pi*2^n] tile
// (0, inf), so the exponent is unique. Negative inputs are handled by the
// sign-preserving extension [x]0 = sign(x)*[|x|]0; droop producers reject
// non-positive values before taking logarithms.

#include <cmath>
#include <numbers>

#include "openpath/errors.hpp"

namespace openpath {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// Result of the norming operator: source = mantissa * 2^exponent, with
// |mantissa| in (pi/2, pi] and the scaling exact (ldexp shifts the binary
// exponent only).
struct NormedValue {
    double mantissa;
    int exponent;
    double source;
};

// Scale x by a power of two into (pi/2, pi], preserving sign.
// The exponent comes from n = ceil(log2(|x|/pi)) with a one-step boundary
// correction against log rounding; containment is then checked exactly.
inline NormedValue norm0(double x) {
    if (x == 0.0) {
        raise(errc::zero_input, "norm0 requires a nonzero input");
    }
    const double ax = std::abs(x);
    int n = static_cast<int>(std::ceil(std::log2(ax / kPi)));
    double m = std::ldexp(ax, -n);
    if (m > kPi) {
        ++n;
        m = std::ldexp(ax, -n);
    } else if (m <= kHalfPi) {
        --n;
        m = std::ldexp(ax, -n);
    }
    return {std::copysign(m, x), n, x};
}

// One stochastic-approximation step: the optimal linear update of the power
// given a potential-energy change is minus the normed change.
inline double stochastic_step(double dV) {
    return -norm0(dV).mantissa;
}

struct DroopPair {
    double k_f;
    double k_p;
};

// Droops induced by synchronization: stationarization norms the squared
// proper-time step, sampling norms the potential change per time step.
inline DroopPair droops_from_potential(double dV, double dTau) {
    const double kf = norm0(dTau * dTau).mantissa;
    const double kp = norm0(dV / dTau).mantissa;
    return {kf, kp};
}

enum class Mechanism { resonance, correlation, balance };

constexpr const char* mechanism_name(Mechanism m) {
    switch (m) {
        case Mechanism::resonance: return "resonance";
        case Mechanism::correlation: return "correlation";
        case Mechanism::balance: return "balance";
    }
    return "unknown";
}

// Per-mechanism pair of path estimates, both in log-droop units.
struct PathEstimate {
    double L_f;
    double L_p;
    Mechanism mechanism;
};

// Half-sum of the logs of yesterday's and today's droop.
inline double path_estimate(double k_prev, double k_next) {
    if (!(k_prev > 0.0) || !(k_next > 0.0)) {
        raise(errc::non_positive_droop,
              "path estimate needs strictly positive droops");
    }
    return 0.5 * (std::log(k_prev) + std::log(k_next));
}

// Euclidean combination of the two path components.
inline double total_euclidean(double L_f, double L_p) {
    return std::hypot(L_f, L_p);
}

// Ropelength combination: the power component carries four times the weight
// of the frequency component.
inline double total_ropelength(double L_f, double L_p) {
    return (L_f + 4.0 * L_p) / 5.0;
}

// The three total paths of a complete prediction.
struct TotalPathReport {
    double L_m;
    double L_d;
    double L_b;
};

} // namespace openpath
