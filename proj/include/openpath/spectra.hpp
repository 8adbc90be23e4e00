#pragma once

// Spectrum reconstruction and the actual droop.
//
// The observed deviation series g is read as data for the first-kind
// integral equation
//
//   integral_0^1 [1 - x/t]_+ phi(x) dx = g(t)
//
// whose kernel vanishes for x > t (a Volterra operator). Observed time
// 1..T is mapped affinely onto [0, 1]; the kernel is discretized with the
// trapezoid rule on a uniform grid of N+1 nodes, and the inversion is
// Tikhonov-regularized with a second-difference penalty:
//
//   min_phi ||K*phi - g||^2 + lambda*||D2*phi||^2
//
// solved as a stacked least-squares problem by QR. The actual droop is the
// ratio of the endpoint deviations of the reconstructed power and frequency
// spectra.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "openpath/errors.hpp"

namespace openpath {

// Per-step frequency or power deviations, t = 1..T.
struct DeviationSeries {
    std::vector<double> values;

    explicit DeviationSeries(std::vector<double> v) : values(std::move(v)) {
        if (values.size() < 2) {
            throw std::invalid_argument("deviation series needs T >= 2");
        }
        for (double x : values) {
            if (!std::isfinite(x)) {
                throw std::invalid_argument("deviation series has a non-finite value");
            }
        }
    }

    std::size_t size() const { return values.size(); }
};

// Path coordinate x(t) = k0 * t * sum_{i<=t} dev(i); emitted for inspection.
struct PathTrace {
    std::vector<double> x;
    double k0;
};

inline PathTrace build_path(const DeviationSeries& series, double k0) {
    if (!(k0 > 0.0)) {
        throw std::invalid_argument("path scaling constant k0 must be positive");
    }
    PathTrace trace;
    trace.k0 = k0;
    trace.x.reserve(series.size());
    double running = 0.0;
    for (std::size_t t = 1; t <= series.size(); ++t) {
        running += series.values[t - 1];
        trace.x.push_back(k0 * static_cast<double>(t) * running);
    }
    return trace;
}

// Reconstructed spectrum on the uniform grid over [0, 1].
struct SpectrumGrid {
    std::vector<double> nodes;
    std::vector<double> phi;
    double lambda;
    double residual;  // L2 data misfit ||K*phi - g||
};

namespace detail {

// Trapezoid discretization of the kernel [1 - x/t]_+ on the uniform grid.
// Row i covers t_i = i/N; the kernel is zero at x = t_i and beyond, so row 0
// is empty and column N never receives weight (only the penalty reaches the
// endpoint value).
inline Eigen::MatrixXd kernel_matrix(int N) {
    const double h = 1.0 / N;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int i = 1; i <= N; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double kij = 1.0 - static_cast<double>(j) / i;
            const double cj = (j == 0 || j == i) ? 0.5 : 1.0;
            K(i, j) = h * cj * kij;
        }
    }
    return K;
}

inline Eigen::MatrixXd second_difference(int N) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N - 1, N + 1);
    for (int i = 0; i < N - 1; ++i) {
        D(i, i) = 1.0;
        D(i, i + 1) = -2.0;
        D(i, i + 2) = 1.0;
    }
    return D;
}

} // namespace detail

// Apply the discretized kernel to spectrum values on the grid.
inline std::vector<double> forward_operator(const std::vector<double>& phi) {
    if (phi.size() < 2) {
        throw std::invalid_argument("forward operator needs at least two nodes");
    }
    const int N = static_cast<int>(phi.size()) - 1;
    const Eigen::MatrixXd K = detail::kernel_matrix(N);
    Eigen::VectorXd p(N + 1);
    for (int j = 0; j <= N; ++j) p[j] = phi[j];
    const Eigen::VectorXd g = K * p;
    return {g.data(), g.data() + g.size()};
}

// Tikhonov inversion of the kernel. g must be sampled on the N+1 grid.
inline SpectrumGrid solve_spectrum(const std::vector<double>& g, int N,
                                   double lambda) {
    if (N < 16) {
        throw std::invalid_argument("grid size must be >= 16");
    }
    if (g.size() != static_cast<std::size_t>(N + 1)) {
        throw std::invalid_argument("datum not sampled on the N+1 grid");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("regularization weight must be >= 0");
    }

    const Eigen::MatrixXd K = detail::kernel_matrix(N);
    const Eigen::MatrixXd D = detail::second_difference(N);
    const double sl = std::sqrt(lambda);

    Eigen::MatrixXd A(2 * N, N + 1);
    A.topRows(N + 1) = K;
    A.bottomRows(N - 1) = sl * D;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * N);
    for (int i = 0; i <= N; ++i) b[i] = g[i];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < N + 1) {
        raise(errc::singular_system,
              "regularized normal equations are numerically singular");
    }
    const Eigen::VectorXd phi = qr.solve(b);

    SpectrumGrid spec;
    spec.lambda = lambda;
    spec.nodes.resize(N + 1);
    spec.phi.resize(N + 1);
    for (int j = 0; j <= N; ++j) {
        spec.nodes[j] = static_cast<double>(j) / N;
        spec.phi[j] = phi[j];
    }
    Eigen::VectorXd gv(N + 1);
    for (int i = 0; i <= N; ++i) gv[i] = g[i];
    spec.residual = (K * phi - gv).norm();
    return spec;
}

// Linear interpolation of the series (observed at t = 1..T mapped to [0,1])
// onto the N+1 solver grid.
inline std::vector<double> resample_to_grid(const DeviationSeries& series,
                                            int N) {
    const std::size_t T = series.size();
    std::vector<double> g(N + 1);
    for (int j = 0; j <= N; ++j) {
        const double x = static_cast<double>(j) / N;
        const double s = x * static_cast<double>(T - 1);  // source coordinate
        const std::size_t lo = std::min(static_cast<std::size_t>(s), T - 2);
        const double frac = s - static_cast<double>(lo);
        g[j] = (1.0 - frac) * series.values[lo] + frac * series.values[lo + 1];
    }
    return g;
}

// Endpoint deviations of the reconstructed spectra and their ratio.
struct ActualDroop {
    double delta_f;
    double delta_P;
    double k;
};

// The droop from the two spectrum endpoints: deviations are measured against
// the nominal level 1, and the droop is their ratio.
inline ActualDroop droop_from_endpoints(double f_end, double p_end) {
    const double df = f_end - 1.0;
    if (std::abs(df) < 1e-12) {
        raise(errc::degenerate_frequency,
              "frequency endpoint at nominal level: droop undefined");
    }
    const double dp = p_end - 1.0;
    return {df, dp, dp / df};
}

// Everything one reconstruction produces: the inspection paths, both
// spectra, and the actual droop.
struct Reconstruction {
    PathTrace path_f;
    PathTrace path_p;
    SpectrumGrid spec_f;
    SpectrumGrid spec_p;
    ActualDroop droop;
};

inline Reconstruction reconstruct_droop(const DeviationSeries& f_series,
                                        const DeviationSeries& p_series,
                                        double k0, int N, double lambda) {
    if (f_series.size() != p_series.size()) {
        throw std::invalid_argument("frequency and power series differ in length");
    }
    Reconstruction rec{build_path(f_series, k0),
                       build_path(p_series, k0),
                       solve_spectrum(resample_to_grid(f_series, N), N, lambda),
                       solve_spectrum(resample_to_grid(p_series, N), N, lambda),
                       {}};
    rec.droop = droop_from_endpoints(rec.spec_f.phi.back(), rec.spec_p.phi.back());
    return rec;
}

inline ActualDroop actual_droop(const DeviationSeries& f_series,
                                const DeviationSeries& p_series, double k0,
                                int N, double lambda) {
    return reconstruct_droop(f_series, p_series, k0, N, lambda).droop;
}

} // namespace openpath
