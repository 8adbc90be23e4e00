#pragma once

// Balance-mechanism droops.
//
// Redundancy production: a Poisson GLM over four colour channels gives the
// current redundancy; the fifth colour adds 8*cos(pi*c5). The GLM is fitted
// by iteratively reweighted least squares with an identity link by default
// (the redundancy is a linear function of the colours); a log link is
// available when the identity fit is ill-posed.
//
// Entropy production: the receiver geometry turns the first two colours
// into channel radii R1 = pi*c1/8 > R2 = pi*c2, registers S(0) = pi*R1^2/4
// and adds the truncated-cone term pi*(R1^2 - R2^2)*sec(v0)/16. The secant
// form 1/|cos v0| replaces (1 + tan^2 v0)^(1/2), which is the same quantity
// without the tangent blow-up.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "openpath/core_math.hpp"
#include "openpath/errors.hpp"

namespace openpath {

// Five spectral colours, each in [0, 1).
struct ColorVector {
    std::array<double, 5> c;
};

inline bool colors_valid(const ColorVector& col) {
    for (double x : col.c) {
        if (!(x >= 0.0) || !(x < 1.0)) return false;
    }
    return true;
}

enum class LinkFunction { identity, log };

constexpr const char* link_name(LinkFunction l) {
    return l == LinkFunction::identity ? "identity" : "log";
}

// Identity-link predictions are clamped below at this floor so the Poisson
// mean stays positive during IRLS.
inline constexpr double kMeanFloor = 1e-6;

// Fitted Poisson GLM: intercept plus four colour coefficients.
struct PoissonModel {
    std::array<double, 5> beta{};
    LinkFunction link = LinkFunction::identity;
    std::vector<double> loglik_trace;  // log-likelihood after each IRLS step
    int iterations = 0;

    double predict(const std::array<double, 4>& c) const {
        double eta = beta[0];
        for (int i = 0; i < 4; ++i) eta += beta[i + 1] * c[i];
        if (link == LinkFunction::identity) {
            return std::max(eta, kMeanFloor);
        }
        return std::exp(eta);
    }
};

// One regression observation: four colours and a nonnegative count.
struct HistoryRow {
    std::array<double, 4> c;
    double count;
};

namespace detail {

inline double poisson_loglik(const Eigen::VectorXd& y,
                             const Eigen::VectorXd& mu) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        ll += y[i] * std::log(mu[i]) - mu[i];
    }
    return ll;
}

} // namespace detail

struct GlmFit {
    Eigen::VectorXd beta;
    std::vector<double> loglik_trace;
    int iterations = 0;
};

// IRLS on an explicit design matrix (e.g. an intercept-only column).
// Identity link: mu = max(eta, floor), weight 1/mu, working response
// eta + (y - mu). Log link: mu = exp(eta), weight mu, working response
// eta + (y - mu)/mu.
inline GlmFit fit_poisson_design(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 LinkFunction link) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (n == 0) {
        raise(errc::empty_data, "no regression rows");
    }
    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        if (qr.rank() < p) {
            raise(errc::rank_deficient, "design matrix lacks full column rank");
        }
    }

    GlmFit fit;
    fit.beta = Eigen::VectorXd::Zero(p);
    const double ymean = y.mean();
    fit.beta[0] = link == LinkFunction::identity
                      ? std::max(ymean, kMeanFloor)
                      : std::log(std::max(ymean, kMeanFloor));

    constexpr int max_iter = 100;
    constexpr double tol = 1e-10;
    for (int iter = 1; iter <= max_iter; ++iter) {
        Eigen::VectorXd eta = X * fit.beta;
        Eigen::VectorXd mu(n), w(n), z(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (link == LinkFunction::identity) {
                mu[i] = std::max(eta[i], kMeanFloor);
                w[i] = 1.0 / mu[i];
                z[i] = eta[i] + (y[i] - mu[i]);
            } else {
                mu[i] = std::exp(std::min(eta[i], 30.0));
                w[i] = mu[i];
                z[i] = eta[i] + (y[i] - mu[i]) / mu[i];
            }
        }
        const Eigen::MatrixXd Xw = w.asDiagonal() * X;
        const Eigen::MatrixXd H = X.transpose() * Xw;
        const Eigen::VectorXd rhs = Xw.transpose() * z;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        if (ldlt.info() != Eigen::Success) {
            raise(errc::rank_deficient, "weighted normal equations degenerate");
        }
        const Eigen::VectorXd beta_new = ldlt.solve(rhs);
        const double step = (beta_new - fit.beta).cwiseAbs().maxCoeff();
        fit.beta = beta_new;
        fit.iterations = iter;

        Eigen::VectorXd eta2 = X * fit.beta;
        Eigen::VectorXd mu2(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu2[i] = link == LinkFunction::identity
                         ? std::max(eta2[i], kMeanFloor)
                         : std::exp(std::min(eta2[i], 30.0));
        }
        fit.loglik_trace.push_back(detail::poisson_loglik(y, mu2));

        if (step < tol) {
            return fit;
        }
    }
    raise(errc::non_convergent, "IRLS did not converge within 100 iterations");
}

// Fit the redundancy regression from history rows (intercept + four
// colours).
inline PoissonModel fit_poisson(const std::vector<HistoryRow>& rows,
                                LinkFunction link) {
    if (rows.empty()) {
        raise(errc::empty_data, "no regression rows");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd X(n, 5);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int j = 0; j < 4; ++j) X(i, j + 1) = rows[i].c[j];
        y[i] = rows[i].count;
    }
    auto fit = fit_poisson_design(X, y, link);
    PoissonModel model;
    for (int j = 0; j < 5; ++j) model.beta[j] = fit.beta[j];
    model.link = link;
    model.loglik_trace = std::move(fit.loglik_trace);
    model.iterations = fit.iterations;
    return model;
}

// Redundancy now, its production, and their sum.
struct RedundancyResult {
    double r0;  // regressed redundancy R(0)
    double dr;  // 8*cos(pi*c5)
    double r1;  // R(1) = R(0) + dR
};

inline RedundancyResult redundancy(const PoissonModel& model,
                                   const ColorVector& colors) {
    const double r0 =
        model.predict({colors.c[0], colors.c[1], colors.c[2], colors.c[3]});
    const double dr = 8.0 * std::cos(kPi * colors.c[4]);
    return {r0, dr, r0 + dr};
}

inline double droop_balance_f(const RedundancyResult& res) {
    if (!(res.r1 > 0.0)) {
        raise(errc::non_positive_droop, "redundancy R(1) not positive");
    }
    return norm0(res.r1).mantissa;
}

// Receiver geometry and the entropy it registers.
struct EntropyResult {
    double r1_radius;  // R1 = pi*c1/8
    double r2_radius;  // R2 = pi*c2
    double v0;         // scan speed, radians
    double s0;         // S(0) = pi*R1^2/4
    double ds;         // truncated-cone term
    double s1;         // S(1) = S(0) + dS
    double r_star;     // sqrt(S(1))
};

inline EntropyResult entropy(const ColorVector& colors, double v0) {
    const double R1 = kPi * colors.c[0] / 8.0;
    const double R2 = kPi * colors.c[1];
    if (!(R1 > R2)) {
        raise(errc::channel_order, "receiver channels out of order (R1 <= R2)");
    }
    const double c = std::cos(v0);
    if (std::abs(c) < 1e-12) {
        raise(errc::grazing_scan, "scan speed at a secant pole");
    }
    EntropyResult res;
    res.r1_radius = R1;
    res.r2_radius = R2;
    res.v0 = v0;
    res.s0 = kPi * R1 * R1 / 4.0;
    res.ds = kPi * (R1 * R1 - R2 * R2) / (16.0 * std::abs(c));
    res.s1 = res.s0 + res.ds;
    res.r_star = std::sqrt(res.s1);
    return res;
}

inline double droop_balance_p(const EntropyResult& res) {
    return norm0(res.r_star).mantissa;
}

// Full balance mechanism: both droops, their path estimates, and the
// ropelength total.
inline std::pair<PathEstimate, double> radiation_paths(
    double k_prev_f, double k_prev_p, const PoissonModel& model,
    const ColorVector& colors, double v0) {
    const double kf = droop_balance_f(redundancy(model, colors));
    const double kp = droop_balance_p(entropy(colors, v0));
    PathEstimate est{path_estimate(k_prev_f, kf), path_estimate(k_prev_p, kp),
                     Mechanism::balance};
    return {est, total_ropelength(est.L_f, est.L_p)};
}

} // namespace openpath
