#pragma once

#include <cstddef>
#include <vector>

#include "spinbath/model.hpp"

namespace spinbath {

/// The finite weighted set {(E_W, p_W)}: terminal points of the 2^N biased
/// random walks over the couplings, each weighted by the product of the
/// per-spin occupation probabilities. This is the local density of states
/// as exact data; its Fourier transform is the decoherence factor.
struct EnergySpectrum {
    std::vector<double> energies;
    std::vector<double> weights;
    bool merged = false;

    std::size_t size() const { return energies.size(); }
};

/// Exact weighted mean and variance of a spectrum.
struct SpectrumMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and standard deviation of the walk-energy distribution:
/// mean = sum_k (p_up - p_down) g_k, std^2 = sum_k 4 p_up p_down g_k^2.
struct GaussianSpectrumParams {
    double mean = 0.0;
    double std = 0.0;
};

/// Weighted histogram of a spectrum, normalized to unit integral.
struct Histogram {
    std::vector<double> centers;
    std::vector<double> densities;
    double bin_width = 0.0;
};

/// Enumerates all 2^N walk energies and weights.
///
/// Energies are built by level doubling: processing spin k extends every
/// existing prefix walk by +g_k and -g_k, so each energy is the left-to-right
/// indexed sum of its signed couplings (bit j of the point's index is the
/// sign choice of spin j) and the whole table costs O(2^N) additions.
///
/// With merge_degenerate set, points are sorted and equal energies combined;
/// equality is exact by default, merge_tolerance > 0 merges near-degenerate
/// points (anchored at the first point of each run). Throws std::length_error
/// when the environment exceeds max_spins.
EnergySpectrum enumerate_spectrum(const Environment& env, bool merge_degenerate = false,
                                  std::size_t max_spins = kDefaultExpansionCap,
                                  double merge_tolerance = 0.0);

/// Characteristic function sum_W p_W e^{i E_W t} of the spectrum. For the
/// spectrum enumerated from an environment this equals the decoherence
/// factor of that environment.
complexd characteristic_function(const EnergySpectrum& spec, double t);

/// Exact weighted mean and variance (compensated summation).
SpectrumMoments spectrum_moments(const EnergySpectrum& spec);

GaussianSpectrumParams gaussian_params(const Environment& env);

/// Closed-form Gaussian approximant e^{i mean t} e^{-std^2 t^2 / 2}.
complexd gaussian_r_approx(const GaussianSpectrumParams& params, double t);

/// Normal density with the walk-energy mean and variance. Throws
/// std::domain_error when std == 0 (degenerate distribution).
double ldos_gaussian_envelope(const GaussianSpectrumParams& params, double energy);

/// Dimensionless ratio max_k |g_k - mean_k| / std of the cumulative walk.
/// Small values indicate no single spin dominates the variance and the
/// Gaussian limit applies; values near 1 flag a dominant coupling. Throws
/// std::domain_error when the cumulative std is zero.
double lindeberg_diagnostic(const Environment& env);

/// Histogram of the spectrum with `bins` bins; bins == 0 selects the
/// Freedman-Diaconis width from the weighted quartiles.
Histogram ldos_histogram(const EnergySpectrum& spec, std::size_t bins = 0);

}  // namespace spinbath
