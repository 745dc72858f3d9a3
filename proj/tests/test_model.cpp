#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>

#include "spinbath/model.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/util.hpp"
#include "test_support.hpp"

using namespace spinbath;
using testsupport::half_up_env;
using testsupport::random_env;
using testsupport::random_state;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("state construction enforces normalization") {
    CHECK_NOTHROW(SystemState(kInvSqrt2, kInvSqrt2));
    CHECK_NOTHROW(SystemState(1.0, 0.0));
    CHECK_THROWS_AS(SystemState(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemState(0.5, 0.5), std::invalid_argument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SystemState(nan, 0.0), std::invalid_argument);

    CHECK_THROWS_AS(BathSpin(1.0, 0.9, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(BathSpin(std::numeric_limits<double>::infinity(), 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(BathSpin(nan, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(BathSpin::from_probability(1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(BathSpin::from_probability(1.0, -0.1), std::invalid_argument);
    const BathSpin s = BathSpin::from_probability(2.0, 0.25);
    CHECK(s.p_up() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(s.p_down() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("single spin factor is cos(t) for balanced amplitudes") {
    const Environment env = half_up_env({1.0});
    const complexd r = decoherence_factor(env, M_PI);
    CHECK(r.real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(decoherence_factor(env, 0.7) -
                   complexd(std::cos(0.7), 0.0)) < 1e-14);
}

TEST_CASE("spins pinned to one basis state cannot decohere") {
    std::vector<BathSpin> spins;
    for (double g : {0.4, 1.3, 2.2}) spins.push_back(BathSpin(g, complexd(1.0, 0.0), 0.0));
    const Environment env{std::move(spins)};
    for (double t : {0.3, 1.7, 12.0, -4.0}) {
        CHECK(std::abs(decoherence_factor(env, t)) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("four-spin product matches the brute-force expansion") {
    const Environment env = half_up_env({0.3, 0.7, 1.1, 1.9});
    const double t = 0.5;
    const complexd r = decoherence_factor(env, t);
    double expect = 1.0;
    for (double g : {0.3, 0.7, 1.1, 1.9}) expect *= std::cos(g * t);
    CHECK(r.real() == doctest::Approx(expect).epsilon(1e-14));
    CHECK(r.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(r - decoherence_factor_expansion(env, t)) < 1e-10);
}

TEST_CASE("t = 0 and the empty environment give exactly 1") {
    const Environment empty;
    const complexd one(1.0, 0.0);
    CHECK(decoherence_factor(empty, 3.7) == one);
    CHECK(decoherence_factor(half_up_env({0.9, 1.4}), 0.0) == one);
    CHECK(decoherence_factor_expansion(empty, 2.0) == one);
    // The expansion sums the walk weights, so t = 0 is only as exact as
    // their total (1 up to a couple of ulps), unlike the product form.
    CHECK(std::abs(decoherence_factor_expansion(half_up_env({0.9}), 0.0) - one) < 1e-15);
}

TEST_CASE("expansion special cases and cap") {
    const Environment two = half_up_env({1.0, 1.0});
    const complexd r = decoherence_factor_expansion(two, M_PI / 4.0);
    CHECK(r.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.imag() == doctest::Approx(0.0).epsilon(1e-14));

    std::mt19937_64 rng(mix_seed(11, 0));
    const Environment big = random_env(rng, 21);
    CHECK_THROWS_AS(decoherence_factor_expansion(big, 1.0, 20), std::length_error);
    CHECK_NOTHROW(decoherence_factor_expansion(big, 1.0, 21));
}

TEST_CASE("non-finite times are rejected") {
    const Environment env = half_up_env({1.0});
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(decoherence_factor(env, inf), std::domain_error);
    CHECK_THROWS_AS(decoherence_factor(env, std::nan("")), std::domain_error);
    CHECK_THROWS_AS(decoherence_factor_expansion(env, inf), std::domain_error);
}

TEST_CASE("product and expansion agree for random environments") {
    std::mt19937_64 rng(mix_seed(17, 0));
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 14.0);
        const Environment env = random_env(rng, n);
        for (int j = 0; j < 8; ++j) {
            const double t = -10.0 + 20.0 * uniform01(rng);
            const complexd a = decoherence_factor(env, t);
            const complexd b = decoherence_factor_expansion(env, t);
            CHECK(std::abs(a - b) < 1e-10);
        }
    }
}

TEST_CASE("conjugation symmetry and modulus bound") {
    std::mt19937_64 rng(mix_seed(23, 0));
    for (int trial = 0; trial < 40; ++trial) {
        const Environment env = random_env(rng, 1 + static_cast<std::size_t>(uniform01(rng) * 10));
        for (int j = 0; j < 6; ++j) {
            const double t = -8.0 + 16.0 * uniform01(rng);
            const complexd r = decoherence_factor(env, t);
            CHECK(decoherence_factor(env, -t) == std::conj(r));  // bit-exact by construction
            CHECK(std::abs(r) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("|r| is stationary at t = 0") {
    std::mt19937_64 rng(mix_seed(29, 0));
    const Environment env = random_env(rng, 8);
    // |r| is even in t, so 1 - |r(h)| should shrink quadratically.
    const double d1 = 1.0 - std::abs(decoherence_factor(env, 1e-3));
    const double d2 = 1.0 - std::abs(decoherence_factor(env, 2e-3));
    CHECK(d1 > 0.0);
    CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("series grid evaluation is thread-count independent") {
    std::mt19937_64 rng(mix_seed(31, 0));
    const Environment env = random_env(rng, 9);
    const std::vector<double> times = linspace(0.0, 6.0, 257);
    const DecoherenceSeries s1 = decoherence_series(env, times, 1);
    const DecoherenceSeries s4 = decoherence_series(env, times, 4);
    REQUIRE(s1.values.size() == s4.values.size());
    CHECK(s1.values[0] == complexd(1.0, 0.0));
    for (std::size_t i = 0; i < s1.values.size(); ++i) {
        CHECK(s1.values[i] == s4.values[i]);  // bitwise
    }
}

TEST_CASE("environments compose by concatenation") {
    std::mt19937_64 rng(mix_seed(37, 0));
    const Environment a = random_env(rng, 5);
    const Environment b = random_env(rng, 7);
    const Environment ab = concat(a, b);
    CHECK(ab.size() == 12);
    for (double t : {0.4, 1.9, -2.3}) {
        const complexd lhs = decoherence_factor(ab, t);
        const complexd rhs = decoherence_factor(a, t) * decoherence_factor(b, t);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("reduced density matrix") {
    const SystemState sys(0.6, 0.8);
    std::mt19937_64 rng(mix_seed(41, 0));
    const Environment env = random_env(rng, 6);

    SUBCASE("t = 0 reproduces the pure projector") {
        const DensityMatrix2 rho = reduced_density_matrix(sys, env, 0.0);
        CHECK(rho.rho00().real() == doctest::Approx(0.36).epsilon(1e-14));
        CHECK(rho.rho11().real() == doctest::Approx(0.64).epsilon(1e-14));
        CHECK(std::abs(rho.rho01() - complexd(0.48, 0.0)) < 1e-14);
        CHECK(rho.eigen_min() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("a pointer state stays diagonal") {
        const DensityMatrix2 rho = reduced_density_matrix(SystemState(1.0, 0.0), env, 2.7);
        CHECK(rho.rho00() == complexd(1.0, 0.0));
        CHECK(rho.rho01() == complexd(0.0, 0.0));
        CHECK(rho.rho11() == complexd(0.0, 0.0));
    }
    SUBCASE("invariants hold for random inputs") {
        for (int trial = 0; trial < 30; ++trial) {
            const SystemState s = random_state(rng);
            const Environment e = random_env(rng, 1 + static_cast<std::size_t>(uniform01(rng) * 9));
            const double t = -5.0 + 10.0 * uniform01(rng);
            const DensityMatrix2 rho = reduced_density_matrix(s, e, t);
            CHECK(std::abs(rho.rho01() - std::conj(rho.rho10())) <= 1e-12);
            CHECK(rho.rho00().real() + rho.rho11().real() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(rho.eigen_min() >= -1e-12);
        }
    }
    SUBCASE("large environments push the off-diagonals to zero") {
        std::vector<BathSpin> spins;
        std::mt19937_64 r2(mix_seed(43, 0));
        for (int k = 0; k < 200; ++k) {
            spins.push_back(BathSpin::from_probability(0.5 + uniform01(r2), 0.5));
        }
        const DensityMatrix2 rho =
            reduced_density_matrix(SystemState(kInvSqrt2, kInvSqrt2), Environment(spins), 3.0);
        CHECK(std::abs(rho.rho01()) < 1e-6);
        CHECK(rho.rho00().real() == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("density matrix validation") {
    CHECK_THROWS_AS(DensityMatrix2(complexd(0.5, 0.0), complexd(0.1, 0.0), complexd(0.3, 0.0),
                                   complexd(0.5, 0.0)),
                    std::invalid_argument);  // not hermitian
    CHECK_THROWS_AS(DensityMatrix2(complexd(0.6, 0.0), complexd(0.0, 0.0), complexd(0.0, 0.0),
                                   complexd(0.6, 0.0)),
                    std::invalid_argument);  // trace 1.2
    CHECK_THROWS_AS(DensityMatrix2(complexd(0.5, 0.0), complexd(0.9, 0.0), complexd(0.9, 0.0),
                                   complexd(0.5, 0.0)),
                    std::invalid_argument);  // negative eigenvalue
}

TEST_CASE("long-time average of |r|^2") {
    SUBCASE("balanced amplitudes give 2^-N") {
        std::vector<double> gs(10, 1.0);
        std::iota(gs.begin(), gs.end(), 1.0);
        CHECK(long_time_avg_sq(half_up_env(gs)) == doctest::Approx(std::ldexp(1.0, -10)));
    }
    SUBCASE("a frozen spin keeps modulus 1") {
        const Environment env{{BathSpin(1.3, complexd(1.0, 0.0), 0.0)}};
        CHECK(long_time_avg_sq(env) == doctest::Approx(1.0));
    }
    SUBCASE("matches the empirical time average for mixed weights") {
        std::vector<BathSpin> spins;
        std::mt19937_64 rng(mix_seed(47, 0));
        for (int k = 0; k < 6; ++k) {
            spins.push_back(BathSpin::from_probability(0.5 + uniform01(rng), 0.2 + 0.6 * uniform01(rng)));
        }
        const Environment env{std::move(spins)};
        const std::vector<double> times = linspace(100.0, 10000.0, 20001);
        const DecoherenceSeries series = decoherence_series(env, times, 2);
        NeumaierSum acc;
        for (const complexd v : series.values) acc.add(std::norm(v));
        const double empirical = acc.value() / static_cast<double>(series.values.size());
        const double analytic = long_time_avg_sq(env);
        CHECK(empirical / analytic > 0.8);
        CHECK(empirical / analytic < 1.25);
    }
}
