#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "openpath/resonance.hpp"
#include "support/oracles.hpp"

using namespace openpath;

namespace {

double rel_diff(const complex_t& a, const complex_t& b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

} // namespace

TEST_CASE("square lattice kills g3") {
    const auto lat = invariants_qseries({1.0, 0.0}, {0.0, 1.0});
    CHECK(std::abs(lat.g3) < 1e-8);
    CHECK(std::abs(lat.g2) > 1.0);  // nondegenerate
}

TEST_CASE("hexagonal lattice kills g2") {
    const complex_t w2 = std::exp(complex_t{0.0, kPi / 3.0});
    const auto lat = invariants_qseries({1.0, 0.0}, w2);
    CHECK(std::abs(lat.g2) < 1e-8);
    CHECK(std::abs(lat.g3) > 0.1);
}

TEST_CASE("lattice sum oracle sees the same symmetries") {
    const auto sq = invariants_latticesum({1.0, 0.0}, {0.0, 1.0}, 60);
    CHECK(std::abs(sq.g3) < 1e-4);
    // The square cutoff breaks the hexagonal symmetry, so g2 -> 0 needs a
    // larger radius: |g2| ~ 1.7/M^2 measured.
    const auto hex = invariants_latticesum(
        {1.0, 0.0}, std::exp(complex_t{0.0, kPi / 3.0}), 150);
    CHECK(std::abs(hex.g2) < 1e-4);
}

TEST_CASE("lattice sum is self-consistent under truncation growth") {
    const auto a = invariants_latticesum({1.0, 0.0}, {0.0, 2.0}, 200);
    const auto b = invariants_latticesum({1.0, 0.0}, {0.0, 2.0}, 400);
    CHECK(rel_diff(a.g2, b.g2) < 1e-6);
    CHECK(rel_diff(a.g3, b.g3) < 1e-6);
}

TEST_CASE("q-series agrees with the lattice sum on (1, 2i)") {
    const auto qs = invariants_qseries({1.0, 0.0}, {0.0, 2.0});
    const auto ls = invariants_latticesum({1.0, 0.0}, {0.0, 2.0}, 400);
    CHECK(rel_diff(qs.g2, ls.g2) < 1e-6);
    CHECK(std::abs(qs.g3 - ls.g3) < 1e-6 * std::abs(qs.g2));
    // disc = g2^3 - 27*g3^2 cancels to ~0.6% of g2^3 here, which amplifies
    // the truncation error of the sum.
    CHECK(rel_diff(qs.disc, ls.disc) < 1e-3);
}

TEST_CASE("q-series vs lattice sum across sampled lattices") {
    std::mt19937_64 rng(31u);
    for (int i = 0; i < 10; ++i) {
        const double re = oracles::uniform(rng, -0.4, 0.4);
        const double im = oracles::uniform(rng, 0.5, 3.0);
        const complex_t w2{re, im};
        const auto qs = invariants_qseries({1.0, 0.0}, w2);
        const auto ls = invariants_latticesum({1.0, 0.0}, w2, 100);
        CHECK(rel_diff(qs.g2, ls.g2) < 1e-4);
        CHECK(rel_diff(qs.g3, ls.g3) < 1e-4);
    }
}

TEST_CASE("invariants scale with the lattice") {
    const complex_t w1{1.0, 0.0}, w2{0.3, 1.4};
    const auto base = invariants_qseries(w1, w2);
    for (double s : {0.5, 2.0, 3.0}) {
        const auto scaled = invariants_qseries(s * w1, s * w2);
        CHECK(rel_diff(scaled.g2, base.g2 / std::pow(s, 4)) < 1e-9);
        CHECK(rel_diff(scaled.g3, base.g3 / std::pow(s, 6)) < 1e-9);
        CHECK(rel_diff(scaled.disc, base.disc / std::pow(s, 12)) < 1e-9);
    }
}

TEST_CASE("discriminant invariant holds") {
    const auto lat = invariants_qseries({1.0, 0.0}, {0.4, 1.2});
    const complex_t want = lat.g2 * lat.g2 * lat.g2 - 27.0 * lat.g3 * lat.g3;
    CHECK(std::abs(lat.disc - want) <=
          8.0 * std::numeric_limits<double>::epsilon() * std::abs(want));
}

TEST_CASE("degenerate lattices are rejected") {
    CHECK_THROWS_MATCHES(invariants_qseries({1.0, 0.0}, {2.0, 0.0}), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::degenerate_lattice;
                         }));
    CHECK_THROWS_AS(invariants_qseries({0.0, 0.0}, {0.0, 1.0}), error);
    CHECK_THROWS_AS(invariants_latticesum({1.0, 0.0}, {2.0, 0.0}, 60), error);
}

TEST_CASE("orientation swap leaves the invariants unchanged") {
    const auto a = invariants_qseries({1.0, 0.0}, {0.0, 2.0});
    const auto b = invariants_qseries({0.0, 2.0}, {1.0, 0.0});
    CHECK(rel_diff(a.g2, b.g2) < 1e-12);
    CHECK(std::abs(a.g3 - b.g3) < 1e-12 * std::abs(a.g2));
}

TEST_CASE("resonance frequency droop from the discriminant") {
    SECTION("unit discriminant") {
        const WeierstrassLattice lat{{1, 0}, {0, 1}, {}, {}, {1.0, 0.0}};
        const auto d = droop_resonance_f(lat);
        CHECK(d.v_in == Catch::Approx(1.0));
        CHECK(d.k == Catch::Approx(2.0));
    }
    SECTION("2^12 discriminant") {
        const WeierstrassLattice lat{{1, 0}, {0, 1}, {}, {}, {4096.0, 0.0}};
        const auto d = droop_resonance_f(lat);
        CHECK(d.v_in == Catch::Approx(0.5));
        CHECK(d.k == Catch::Approx(2.0));
    }
    SECTION("collapsed lattice") {
        const WeierstrassLattice lat{{1, 0}, {0, 1}, {}, {}, {0.0, 0.0}};
        CHECK_THROWS_MATCHES(droop_resonance_f(lat), error,
                             Catch::Matchers::Predicate<error>([](const error& e) {
                                 return e.code() == errc::zero_discriminant;
                             }));
    }
}

TEST_CASE("droop mantissa is invariant under dyadic lattice rescaling") {
    const complex_t w1{1.0, 0.0}, w2{0.3, 1.4};
    const auto a = droop_resonance_f(invariants_qseries(w1, w2));
    const auto b = droop_resonance_f(invariants_qseries(2.0 * w1, 2.0 * w2));
    CHECK(a.k == Catch::Approx(b.k).epsilon(1e-12));
}

TEST_CASE("proper time of the wing") {
    SECTION("level flight") {
        const WingTrace wing{{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
        CHECK(proper_time_sq(wing) == Catch::Approx(4.0));
    }
    SECTION("diagonal flight collapses the clock") {
        const WingTrace wing{{1.0, -2.0}, {1.0, -2.0}};
        CHECK(proper_time_sq(wing) == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("mixed speeds") {
        const WingTrace wing{{1.0, 2.0}, {2.0, 2.0}};
        CHECK(proper_time_sq(wing) == Catch::Approx(0.75));
    }
    SECTION("zero vertical speed") {
        const WingTrace wing{{1.0, 1.0}, {1.0, 0.0}};
        CHECK_THROWS_MATCHES(proper_time_sq(wing), error,
                             Catch::Matchers::Predicate<error>([](const error& e) {
                                 return e.code() == errc::zero_vertical_speed;
                             }));
    }
    SECTION("sign flips of a pair do not matter") {
        std::mt19937_64 rng(5u);
        for (int i = 0; i < 200; ++i) {
            WingTrace wing;
            for (int t = 0; t < 6; ++t) {
                wing.u.push_back(oracles::uniform(rng, -2.0, 2.0));
                wing.v.push_back(oracles::uniform(rng, 0.5, 2.0));
            }
            WingTrace flipped = wing;
            flipped.u[2] = -flipped.u[2];
            flipped.v[2] = -flipped.v[2];
            CHECK(proper_time_sq(flipped) ==
                  Catch::Approx(proper_time_sq(wing)).margin(1e-12));
        }
    }
}

TEST_CASE("resonance power droop") {
    const auto d = droop_resonance_p(4.0);
    CHECK(d.k == Catch::Approx(2.0));
    CHECK(d.v_out == Catch::Approx(4.0));

    const auto d2 = droop_resonance_p(kPi);
    CHECK(d2.k == Catch::Approx(kPi));

    CHECK_THROWS_MATCHES(droop_resonance_p(0.0), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::non_positive_droop;
                         }));
}

TEST_CASE("molecule paths chain to the Euclidean total") {
    const WeierstrassLattice lat{{1, 0}, {0, 1}, {}, {}, {1.0, 0.0}};
    const WingTrace wing{{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
    const auto [est, L_m] = molecule_paths(2.0, 2.0, lat, wing);
    CHECK(est.mechanism == Mechanism::resonance);
    CHECK(est.L_f == Catch::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(est.L_p == Catch::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(L_m == Catch::Approx(std::sqrt(2.0) * std::log(2.0)).epsilon(1e-14));
    CHECK(L_m == Catch::Approx(0.9803).margin(1e-4));
}
