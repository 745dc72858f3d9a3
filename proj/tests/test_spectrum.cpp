#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "spinbath/model.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/spectrum.hpp"
#include "spinbath/util.hpp"
#include "test_support.hpp"

using namespace spinbath;
using testsupport::half_up_env;
using testsupport::random_env;

TEST_CASE("two balanced spins enumerate four equal-weight lines") {
    const Environment env = half_up_env({1.0, 2.0});
    EnergySpectrum spec = enumerate_spectrum(env);
    REQUIRE(spec.size() == 4);
    std::vector<double> sorted = spec.energies;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<double>{-3.0, -1.0, 1.0, 3.0});
    for (double w : spec.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(!spec.merged);
}

TEST_CASE("degenerate merging recovers binomial weights") {
    const Environment env = half_up_env({1.0, 1.0, 1.0});
    const EnergySpectrum spec = enumerate_spectrum(env, true);
    REQUIRE(spec.size() == 4);
    CHECK(spec.merged);
    CHECK(spec.energies == std::vector<double>{-3.0, -1.0, 1.0, 3.0});
    CHECK(spec.weights[0] == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(spec.weights[1] == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(spec.weights[2] == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(spec.weights[3] == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("merged spectra are sorted and conserve weight") {
    std::mt19937_64 rng(mix_seed(101, 0));
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 10);
        const Environment env = random_env(rng, n);
        const EnergySpectrum spec = enumerate_spectrum(env, true);
        CHECK(spec.size() <= (std::size_t{1} << n));
        CHECK(std::is_sorted(spec.energies.begin(), spec.energies.end()));
        NeumaierSum total;
        for (double w : spec.weights) {
            CHECK(w >= 0.0);
            total.add(w);
        }
        CHECK(total.value() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("merge tolerance collapses near-degenerate lines") {
    const Environment env = half_up_env({1.0, 1.0 + 1e-13});
    CHECK(enumerate_spectrum(env, true).size() == 4);
    const EnergySpectrum coarse = enumerate_spectrum(env, true, 20, 1e-9);
    CHECK(coarse.size() == 3);
    CHECK_THROWS_AS(enumerate_spectrum(env, true, 20, -1.0), std::invalid_argument);
}

TEST_CASE("enumeration respects the size cap") {
    std::mt19937_64 rng(mix_seed(103, 0));
    const Environment env = random_env(rng, 21);
    CHECK_THROWS_AS(enumerate_spectrum(env), std::length_error);
    CHECK_NOTHROW(enumerate_spectrum(env, false, 21));
}

TEST_CASE("characteristic function reproduces the time-domain factor") {
    std::mt19937_64 rng(mix_seed(107, 0));
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 12);
        const Environment env = random_env(rng, n);
        const EnergySpectrum plain = enumerate_spectrum(env);
        const EnergySpectrum merged = enumerate_spectrum(env, true);
        for (int j = 0; j < 6; ++j) {
            const double t = -9.0 + 18.0 * uniform01(rng);
            const complexd r = decoherence_factor(env, t);
            CHECK(std::abs(characteristic_function(plain, t) - r) < 1e-10);
            CHECK(std::abs(characteristic_function(merged, t) - r) < 1e-10);
        }
    }
    const EnergySpectrum spec = enumerate_spectrum(half_up_env({0.8, 1.6}));
    CHECK(std::abs(characteristic_function(spec, 0.0) - complexd(1.0, 0.0)) < 1e-14);
}

TEST_CASE("moments match the closed-form coupling sums") {
    SUBCASE("single tilted spin") {
        const Environment env{{BathSpin::from_probability(2.0, 0.25)}};
        const SpectrumMoments m = spectrum_moments(enumerate_spectrum(env));
        CHECK(m.mean == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(m.variance == doctest::Approx(3.0).epsilon(1e-14));
        const GaussianSpectrumParams gp = gaussian_params(env);
        CHECK(gp.mean == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(gp.std == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    }
    SUBCASE("random environments") {
        std::mt19937_64 rng(mix_seed(109, 0));
        for (int trial = 0; trial < 15; ++trial) {
            const Environment env = random_env(rng, 1 + static_cast<std::size_t>(uniform01(rng) * 10));
            const SpectrumMoments m = spectrum_moments(enumerate_spectrum(env));
            // Independent route: per-spin mean and variance add.
            NeumaierSum mean_acc, var_acc;
            for (const BathSpin& s : env) {
                mean_acc.add((s.p_up() - s.p_down()) * s.g());
                var_acc.add(4.0 * s.p_up() * s.p_down() * s.g() * s.g());
            }
            CHECK(m.mean == doctest::Approx(mean_acc.value()).epsilon(1e-10));
            CHECK(m.variance == doctest::Approx(var_acc.value()).epsilon(1e-10));
            const GaussianSpectrumParams gp = gaussian_params(env);
            CHECK(gp.mean == doctest::Approx(m.mean).epsilon(1e-10));
            CHECK(gp.std * gp.std == doctest::Approx(m.variance).epsilon(1e-10));
        }
    }
}

TEST_CASE("gaussian surrogate has the advertised modulus and phase") {
    const GaussianSpectrumParams gp{0.7, 2.0};
    for (double t : {0.0, 0.3, -1.1}) {
        const complexd r = gaussian_r_approx(gp, t);
        CHECK(std::abs(r) == doctest::Approx(std::exp(-2.0 * t * t)).epsilon(1e-14));
        CHECK(std::arg(r) == doctest::Approx(std::remainder(0.7 * t, 2.0 * M_PI)).epsilon(1e-12));
    }
}

TEST_CASE("gaussian surrogate tracks many weak couplings") {
    std::vector<double> gs(60);
    std::mt19937_64 rng(mix_seed(113, 0));
    for (double& g : gs) g = 0.5 + uniform01(rng);
    const Environment env = half_up_env(gs);
    const GaussianSpectrumParams gp = gaussian_params(env);
    for (double t = 0.0; std::exp(-0.5 * gp.std * gp.std * t * t) > 0.1; t += 0.01) {
        const double exact = std::abs(decoherence_factor(env, t));
        const double approx = std::abs(gaussian_r_approx(gp, t));
        CHECK(std::abs(exact - approx) < 0.02);
    }
}

TEST_CASE("envelope is a unit-mass gaussian density") {
    const GaussianSpectrumParams gp{-0.4, 1.3};
    CHECK(ldos_gaussian_envelope(gp, -0.4) ==
          doctest::Approx(1.0 / (1.3 * std::sqrt(2.0 * M_PI))).epsilon(1e-14));
    const std::vector<double> grid = linspace(-0.4 - 8 * 1.3, -0.4 + 8 * 1.3, 4001);
    NeumaierSum mass;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        mass.add(0.5 * h * (ldos_gaussian_envelope(gp, grid[i]) + ldos_gaussian_envelope(gp, grid[i + 1])));
    }
    CHECK(mass.value() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(ldos_gaussian_envelope(GaussianSpectrumParams{0.0, 0.0}, 1.0), std::domain_error);
}

TEST_CASE("lindeberg diagnostic shrinks as 1/sqrt(N)") {
    for (std::size_t n : {4u, 16u, 64u}) {
        const Environment env = half_up_env(std::vector<double>(n, 1.5));
        CHECK(lindeberg_diagnostic(env) == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-12));
    }
    const Environment frozen{{BathSpin(1.0, complexd(1.0, 0.0), 0.0)}};
    CHECK_THROWS_AS(lindeberg_diagnostic(frozen), std::domain_error);
}

TEST_CASE("histogram approximates the level density") {
    std::mt19937_64 rng(mix_seed(127, 0));
    const Environment env = random_env(rng, 12);
    const EnergySpectrum spec = enumerate_spectrum(env);
    const Histogram h = ldos_histogram(spec);
    REQUIRE(!h.centers.empty());
    CHECK(h.centers.size() == h.densities.size());
    CHECK(std::is_sorted(h.centers.begin(), h.centers.end()));
    NeumaierSum mass;
    for (double d : h.densities) {
        CHECK(d >= 0.0);
        mass.add(d * h.bin_width);
    }
    CHECK(mass.value() == doctest::Approx(1.0).epsilon(1e-10));

    const Histogram fixed = ldos_histogram(spec, 32);
    CHECK(fixed.centers.size() == 32);
}

TEST_CASE("histogram handles a single line and rejects empty input") {
    const EnergySpectrum empty_env_spec = enumerate_spectrum(Environment{});
    const Histogram h = ldos_histogram(empty_env_spec);
    REQUIRE(h.centers.size() == 1);
    CHECK(h.centers[0] == 0.0);
    CHECK(h.densities[0] == doctest::Approx(1.0));
    CHECK(h.bin_width == 1.0);

    EnergySpectrum empty;
    CHECK_THROWS_AS(ldos_histogram(empty), std::invalid_argument);
}
