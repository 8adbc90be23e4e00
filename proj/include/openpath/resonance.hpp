#pragma once

// Resonance-mechanism droops.
//
// The frequency droop comes from the discriminant of the Weierstrass
// invariants of a period lattice, the power droop from the proper-time sum
// of a thin-wing trace. Both feed the norming operator.
//
// Lattice conventions (classical half-period form): the inputs omega1,
// omega2 are half-periods, the lattice is { 2*m*omega1 + 2*n*omega2 }, and
// tau = omega2/omega1 with Im(tau) > 0 (the pair is swapped if needed; the
// lattice is the same set either way). With the nome q = exp(i*pi*tau) the
// invariants are
//
//   g2 = (pi/omega1)^4 * E4(tau) / 12,   E4 = 1 + 240 * sum sigma3(n) q^(2n)
//   g3 = (pi/omega1)^6 * E6(tau) / 216,  E6 = 1 - 504 * sum sigma5(n) q^(2n)
//
// (DLMF 23.9 rescaled to this lattice). The direct lattice sum
// g2 = 60*sum' w^-4, g3 = 140*sum' w^-6 over the same lattice serves as the
// independent cross-check route.

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "openpath/core_math.hpp"
#include "openpath/errors.hpp"

namespace openpath {

using complex_t = std::complex<double>;

// Period lattice with its invariants and discriminant g2^3 - 27*g3^2.
struct WeierstrassLattice {
    complex_t omega1;
    complex_t omega2;
    complex_t g2;
    complex_t g3;
    complex_t disc;
};

namespace detail {

inline complex_t cpow_int(complex_t base, int n) {
    complex_t acc{1.0, 0.0};
    for (int i = 0; i < n; ++i) acc *= base;
    return acc;
}

// sigma_k(n): sum of the k-th powers of the divisors of n.
inline double divisor_power_sum(std::int64_t n, int k) {
    double total = 0.0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        const std::int64_t e = n / d;
        double dp = 1.0, ep = 1.0;
        for (int i = 0; i < k; ++i) {
            dp *= static_cast<double>(d);
            ep *= static_cast<double>(e);
        }
        total += dp;
        if (e != d) total += ep;
    }
    return total;
}

// Orient the half-period pair so Im(omega2/omega1) > 0.
inline std::pair<complex_t, complex_t> oriented_pair(complex_t omega1,
                                                     complex_t omega2) {
    if (std::abs(omega1) == 0.0 || std::abs(omega2) == 0.0) {
        raise(errc::degenerate_lattice, "zero lattice frequency");
    }
    complex_t tau = omega2 / omega1;
    if (std::abs(tau.imag()) < 1e-12) {
        raise(errc::degenerate_lattice, "tau is real: collapsed lattice");
    }
    if (tau.imag() < 0.0) std::swap(omega1, omega2);
    return {omega1, omega2};
}

} // namespace detail

// Invariants from the Eisenstein q-series. Terms are added until the next
// one falls below 1e-15 relative; a hard cap of 1e4 terms guards slowly
// converging nomes.
inline WeierstrassLattice invariants_qseries(complex_t omega1,
                                             complex_t omega2) {
    auto [w1, w2] = detail::oriented_pair(omega1, omega2);
    const complex_t tau = w2 / w1;
    const complex_t q = std::exp(complex_t{0.0, kPi} * tau);
    if (std::abs(q) >= 1.0 - 1e-6) {
        raise(errc::degenerate_lattice, "nome too close to the unit circle");
    }

    const complex_t q2 = q * q;
    complex_t s4{0.0, 0.0};
    complex_t s6{0.0, 0.0};
    complex_t q2n{1.0, 0.0};
    constexpr std::int64_t max_terms = 10000;
    std::int64_t n = 1;
    for (; n <= max_terms; ++n) {
        q2n *= q2;
        const complex_t t4 = detail::divisor_power_sum(n, 3) * q2n;
        const complex_t t6 = detail::divisor_power_sum(n, 5) * q2n;
        s4 += t4;
        s6 += t6;
        const double scale4 = 1.0 + std::abs(s4);
        const double scale6 = 1.0 + std::abs(s6);
        if (std::abs(t4) < 1e-15 * scale4 && std::abs(t6) < 1e-15 * scale6) {
            break;
        }
    }
    if (n > max_terms) {
        raise(errc::non_convergent, "Eisenstein q-series did not converge");
    }

    const complex_t e4 = 1.0 + 240.0 * s4;
    const complex_t e6 = 1.0 - 504.0 * s6;
    const complex_t r = kPi / w1;
    WeierstrassLattice lat;
    lat.omega1 = w1;
    lat.omega2 = w2;
    lat.g2 = detail::cpow_int(r, 4) * e4 / 12.0;
    lat.g3 = detail::cpow_int(r, 6) * e6 / 216.0;
    lat.disc = detail::cpow_int(lat.g2, 3) - 27.0 * lat.g3 * lat.g3;
    return lat;
}

// Definitional oracle: truncated double sums over the lattice points
// w = 2*m*omega1 + 2*n*omega2 with |m|, |n| <= M. Converges polynomially;
// meant for cross-validation, not production use.
inline WeierstrassLattice invariants_latticesum(complex_t omega1,
                                                complex_t omega2, int M) {
    if (M < 20) {
        throw std::invalid_argument("lattice sum needs truncation radius >= 20");
    }
    auto [w1, w2] = detail::oriented_pair(omega1, omega2);
    complex_t s4{0.0, 0.0};
    complex_t s6{0.0, 0.0};
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            if (m == 0 && n == 0) continue;
            const complex_t w = 2.0 * (static_cast<double>(m) * w1 +
                                       static_cast<double>(n) * w2);
            const complex_t w2c = w * w;
            const complex_t w4 = w2c * w2c;
            s4 += 1.0 / w4;
            s6 += 1.0 / (w4 * w2c);
        }
    }
    WeierstrassLattice lat;
    lat.omega1 = w1;
    lat.omega2 = w2;
    lat.g2 = 60.0 * s4;
    lat.g3 = 140.0 * s6;
    lat.disc = detail::cpow_int(lat.g2, 3) - 27.0 * lat.g3 * lat.g3;
    return lat;
}

// Frequency droop under resonance plus the internal potential it is
// derived from.
struct ResonanceFreqDroop {
    double k;     // in (pi/2, pi]
    double v_in;  // |disc|^(-1/12)
};

inline ResonanceFreqDroop droop_resonance_f(const WeierstrassLattice& lat) {
    const double ad = std::abs(lat.disc);
    if (ad < 1e-300) {
        raise(errc::zero_discriminant, "discriminant vanished: collapsed lattice");
    }
    const double v_in = std::pow(ad, -1.0 / 12.0);
    return {norm0(v_in).mantissa, v_in};
}

// Horizontal/vertical speeds of the wing surrogate, one sample per step.
struct WingTrace {
    std::vector<double> u;
    std::vector<double> v;

    std::size_t size() const { return u.size(); }
};

// Proper-time sum of the wing clock: sum of 1 - (u_i/v_i)^2.
inline double proper_time_sq(const WingTrace& wing) {
    if (wing.u.size() != wing.v.size()) {
        throw std::invalid_argument("wing speed columns differ in length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < wing.v.size(); ++i) {
        if (wing.v[i] == 0.0) {
            raise(errc::zero_vertical_speed, "wing has a zero vertical speed");
        }
        const double r = wing.u[i] / wing.v[i];
        acc += 1.0 - r * r;
    }
    return acc;
}

// Internal and external potential energies of the open system: V^in from
// the discriminant, V^out from the proper-time sum. Both strictly positive
// wherever the droops they feed are defined.
struct PotentialPair {
    double v_in;
    double v_out;
};

// Power droop under resonance plus the external potential it equals.
struct ResonancePowerDroop {
    double k;      // in (pi/2, pi]
    double v_out;  // the proper-time sum itself
};

inline ResonancePowerDroop droop_resonance_p(double dtau2) {
    if (!(dtau2 > 0.0)) {
        raise(errc::non_positive_droop,
              "proper-time sum must be positive to define a droop");
    }
    return {norm0(dtau2).mantissa, dtau2};
}

// Full resonance mechanism: both droops, their path estimates, and the
// Euclidean total.
inline std::pair<PathEstimate, double> molecule_paths(
    double k_prev_f, double k_prev_p, const WeierstrassLattice& lat,
    const WingTrace& wing) {
    const double kf = droop_resonance_f(lat).k;
    const double kp = droop_resonance_p(proper_time_sq(wing)).k;
    PathEstimate est{path_estimate(k_prev_f, kf), path_estimate(k_prev_p, kp),
                     Mechanism::resonance};
    return {est, total_euclidean(est.L_f, est.L_p)};
}

} // namespace openpath
