#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "openpath/spectra.hpp"
#include "support/oracles.hpp"

using namespace openpath;

namespace {

std::vector<double> grid_nodes(int N) {
    std::vector<double> x(N + 1);
    for (int j = 0; j <= N; ++j) x[j] = static_cast<double>(j) / N;
    return x;
}

std::vector<double> sample(int N, double (*f)(double)) {
    std::vector<double> v(N + 1);
    for (int j = 0; j <= N; ++j) v[j] = f(static_cast<double>(j) / N);
    return v;
}

double rel_l2_error(const std::vector<double>& got,
                    const std::vector<double>& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += (got[i] - want[i]) * (got[i] - want[i]);
        den += want[i] * want[i];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

} // namespace

TEST_CASE("build_path follows the running sum") {
    SECTION("all-zero deviations") {
        const auto trace = build_path(DeviationSeries({0.0, 0.0, 0.0}), 1.0);
        CHECK(trace.x == std::vector<double>{0.0, 0.0, 0.0});
    }
    SECTION("unit deviations grow quadratically") {
        const auto trace = build_path(DeviationSeries({1.0, 1.0, 1.0}), 1.0);
        CHECK(trace.x == std::vector<double>{1.0, 4.0, 9.0});
    }
    SECTION("cancelling deviations") {
        const auto trace = build_path(DeviationSeries({1.0, -1.0}), 2.0);
        CHECK(trace.x == std::vector<double>{2.0, 0.0});
    }
}

TEST_CASE("series validation") {
    CHECK_THROWS_AS(DeviationSeries({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DeviationSeries({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(build_path(DeviationSeries({1.0, 2.0}), 0.0),
                    std::invalid_argument);
}

TEST_CASE("forward operator on analytic spectra") {
    const int N = 200;
    SECTION("zero spectrum") {
        const auto g = forward_operator(std::vector<double>(N + 1, 0.0));
        for (double v : g) CHECK(v == 0.0);
    }
    SECTION("constant spectrum gives t/2") {
        const auto g = forward_operator(std::vector<double>(N + 1, 1.0));
        const auto x = grid_nodes(N);
        for (int i = 0; i <= N; ++i) {
            CHECK(g[i] == Catch::Approx(x[i] / 2.0).margin(1e-12));
        }
    }
    SECTION("linear spectrum gives t^2/6") {
        const auto g = forward_operator(sample(N, [](double x) { return x; }));
        const auto x = grid_nodes(N);
        for (int i = 0; i <= N; ++i) {
            CHECK(g[i] == Catch::Approx(x[i] * x[i] / 6.0).margin(1e-5));
        }
    }
}

TEST_CASE("forward operator is linear") {
    const int N = 64;
    std::mt19937_64 rng(11u);
    std::vector<double> p1(N + 1), p2(N + 1);
    for (int j = 0; j <= N; ++j) {
        p1[j] = oracles::uniform(rng, -1.0, 1.0);
        p2[j] = oracles::uniform(rng, -1.0, 1.0);
    }
    const double a = 1.75, b = -0.5;
    std::vector<double> combo(N + 1);
    for (int j = 0; j <= N; ++j) combo[j] = a * p1[j] + b * p2[j];

    const auto g1 = forward_operator(p1);
    const auto g2 = forward_operator(p2);
    const auto gc = forward_operator(combo);
    for (int i = 0; i <= N; ++i) {
        const double want = a * g1[i] + b * g2[i];
        CHECK(gc[i] == Catch::Approx(want).margin(8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(want))));
    }
}

TEST_CASE("Tikhonov inversion round-trips smooth spectra") {
    const int N = 200;
    const double lambda = 1e-8;
    SECTION("constant") {
        const auto g = forward_operator(std::vector<double>(N + 1, 1.0));
        const auto spec = solve_spectrum(g, N, lambda);
        double maxerr = 0.0;
        for (double v : spec.phi) maxerr = std::max(maxerr, std::abs(v - 1.0));
        CHECK(maxerr < 1e-2);
    }
    SECTION("linear") {
        const auto truth = sample(N, [](double x) { return x; });
        const auto spec = solve_spectrum(forward_operator(truth), N, lambda);
        CHECK(rel_l2_error(spec.phi, truth) < 1e-2);
    }
    SECTION("gaussian bump") {
        const auto truth = sample(N, [](double x) {
            return std::exp(-(x - 0.5) * (x - 0.5) / 0.02);
        });
        const auto spec = solve_spectrum(forward_operator(truth), N, lambda);
        CHECK(rel_l2_error(spec.phi, truth) < 1e-2);
    }
}

TEST_CASE("zero datum reconstructs the zero spectrum") {
    const int N = 64;
    const auto spec = solve_spectrum(std::vector<double>(N + 1, 0.0), N, 1e-6);
    for (double v : spec.phi) CHECK(std::abs(v) < 1e-12);
    CHECK(spec.residual == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("unregularized system is singular") {
    const int N = 32;
    CHECK_THROWS_MATCHES(
        solve_spectrum(std::vector<double>(N + 1, 1.0), N, 0.0), error,
        Catch::Matchers::Predicate<error>([](const error& e) {
            return e.code() == errc::singular_system;
        }));
}

TEST_CASE("residual is nondecreasing in lambda") {
    const int N = 128;
    auto g = forward_operator(sample(N, [](double x) {
        return std::exp(-(x - 0.5) * (x - 0.5) / 0.02);
    }));
    std::mt19937_64 rng(23u);
    for (double& v : g) v += 1e-3 * oracles::uniform(rng, -1.0, 1.0);

    double prev = -1.0;
    for (int k = 0; k < 10; ++k) {
        const double lambda = std::pow(10.0, -8.0 + k);
        const auto spec = solve_spectrum(g, N, lambda);
        CHECK(spec.residual >= prev - 1e-12);
        prev = spec.residual;
    }
}

TEST_CASE("solver argument checks") {
    CHECK_THROWS_AS(solve_spectrum(std::vector<double>(9, 0.0), 8, 1e-6),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_spectrum(std::vector<double>(10, 0.0), 32, 1e-6),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_spectrum(std::vector<double>(33, 0.0), 32, -1.0),
                    std::invalid_argument);
}

TEST_CASE("droop from engineered endpoints") {
    const int N = 200;
    // Spectra with endpoint values 2 and 4: phi_f = 2x, phi_P = 4x.
    const auto g_f = forward_operator(sample(N, [](double x) { return 2.0 * x; }));
    const auto g_p = forward_operator(sample(N, [](double x) { return 4.0 * x; }));

    // Feed the forward images back through the series interface: T = N+1
    // samples resample onto the grid exactly.
    const auto droop = actual_droop(DeviationSeries(g_f), DeviationSeries(g_p),
                                    1.0, N, 1e-8);
    CHECK(droop.delta_f == Catch::Approx(1.0).margin(1e-3));
    CHECK(droop.delta_P == Catch::Approx(3.0).margin(1e-3));
    CHECK(droop.k == Catch::Approx(3.0).margin(1e-2));
    // Invariant: k * delta_f = delta_P by construction.
    CHECK(droop.k * droop.delta_f == Catch::Approx(droop.delta_P).epsilon(8.0 * std::numeric_limits<double>::epsilon()));
}

TEST_CASE("endpoint droop arithmetic") {
    const auto d = droop_from_endpoints(0.5, 0.75);
    CHECK(d.delta_f == Catch::Approx(-0.5));
    CHECK(d.delta_P == Catch::Approx(-0.25));
    CHECK(d.k == Catch::Approx(0.5));
}

TEST_CASE("nominal frequency endpoint is degenerate") {
    CHECK_THROWS_MATCHES(droop_from_endpoints(1.0, 2.0), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::degenerate_frequency;
                         }));
}

TEST_CASE("resampling is exact at the sample points") {
    // T = N+1 samples map node-for-node onto the grid.
    const int N = 16;
    std::vector<double> v(N + 1);
    for (int j = 0; j <= N; ++j) v[j] = std::sin(0.3 * j);
    const auto g = resample_to_grid(DeviationSeries(v), N);
    for (int j = 0; j <= N; ++j) CHECK(g[j] == Catch::Approx(v[j]).margin(1e-14));
}
