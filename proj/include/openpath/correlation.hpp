#pragma once

// Correlation-mechanism droops.
//
// The frequency droop norms the mediant of two resonant frequency ratios;
// the power droop norms the reciprocal of the potential gap. The mediant
// (a+c)/(b+d) of fractions a/b < c/d lies strictly between them, which is
// the sampling property the mechanism relies on.

#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "openpath/core_math.hpp"
#include "openpath/errors.hpp"
#include "openpath/resonance.hpp"

namespace openpath {

// Four positive frequencies forming two Poincare resonances
// n1*w1 + m1*w2 = 0 and n2*w3 + m2*w4 = 0 with integer pairs of opposite
// sign. Canonical order has w1/w2 <= w3/w4.
struct ResonanceQuad {
    std::array<double, 4> omega;
    std::array<std::pair<int, int>, 2> pairs;
};

namespace detail {

// Smallest signed pair (n, -m), n, m in [1, B], with n*wa ~ m*wb.
inline std::pair<int, int> find_resonance_pair(double wa, double wb, int B) {
    for (int n = 1; n <= B; ++n) {
        for (int m = 1; m <= B; ++m) {
            const double lhs = static_cast<double>(n) * wa;
            const double rhs = static_cast<double>(m) * wb;
            if (std::abs(lhs - rhs) <= 1e-9 * (lhs + rhs)) {
                return {n, -m};
            }
        }
    }
    raise(errc::no_resonance, "no integer resonance pair within bound");
}

} // namespace detail

// Validate a frequency quad by finding its resonance pairs within the
// search bound. Positive frequencies force the integer pairs to have
// opposite signs; the pair search scans n, m >= 1 in lexicographic order so
// the reduced pair is found first.
inline ResonanceQuad validate_quad(const std::array<double, 4>& omega, int B) {
    for (double w : omega) {
        if (!(w > 0.0)) {
            throw std::invalid_argument("quad frequencies must be positive");
        }
    }
    if (B < 1) {
        throw std::invalid_argument("resonance search bound must be >= 1");
    }
    std::array<double, 4> w = omega;
    // Canonicalize so rho1 = w1/w2 <= rho2 = w3/w4; the mediant itself is
    // order-insensitive.
    if (w[0] / w[1] > w[2] / w[3]) {
        std::swap(w[0], w[2]);
        std::swap(w[1], w[3]);
    }
    ResonanceQuad quad;
    quad.omega = w;
    quad.pairs[0] = detail::find_resonance_pair(w[0], w[1], B);
    quad.pairs[1] = detail::find_resonance_pair(w[2], w[3], B);
    return quad;
}

// rho_{3,1}: the mediant of the two resonant ratios.
inline double mediant_correlation(const ResonanceQuad& quad) {
    return (quad.omega[0] + quad.omega[2]) / (quad.omega[1] + quad.omega[3]);
}

// Frequency droop under correlations (twisting of a circular DNA).
inline double droop_corr_f(const ResonanceQuad& quad) {
    const double rho = mediant_correlation(quad);
    if (!(rho > 0.0)) {
        raise(errc::non_positive_droop, "mediant correlation not positive");
    }
    return norm0(rho).mantissa;
}

// rho_{3,2} and the half-gap V'. The identity v_prime = 1/(2*rho32) holds
// by construction. rho31 is filled in by callers that also hold a quad.
struct CorrelationResult {
    double rho31 = std::numeric_limits<double>::quiet_NaN();
    double rho32 = 0.0;
    double v_prime = 0.0;
};

inline CorrelationResult potential_correlation(const PotentialPair& pot) {
    const double gap = pot.v_out - pot.v_in;
    if (std::abs(gap) < 1e-12) {
        raise(errc::equal_potentials, "potential gap vanished");
    }
    CorrelationResult res;
    res.rho32 = 1.0 / gap;
    res.v_prime = gap / 2.0;
    return res;
}

// Power droop under correlations (rising of a circular DNA).
inline double droop_corr_p(const CorrelationResult& res) {
    if (!(res.rho32 > 0.0)) {
        raise(errc::non_positive_droop,
              "rho_{3,2} not positive: external potential below internal");
    }
    return norm0(res.rho32).mantissa;
}

// Full correlation mechanism: both droops, their path estimates, and the
// ropelength total.
inline std::pair<PathEstimate, double> dna_paths(double k_prev_f,
                                                 double k_prev_p,
                                                 const ResonanceQuad& quad,
                                                 const PotentialPair& pot) {
    const double kf = droop_corr_f(quad);
    const double kp = droop_corr_p(potential_correlation(pot));
    PathEstimate est{path_estimate(k_prev_f, kf), path_estimate(k_prev_p, kp),
                     Mechanism::correlation};
    return {est, total_ropelength(est.L_f, est.L_p)};
}

} // namespace openpath
