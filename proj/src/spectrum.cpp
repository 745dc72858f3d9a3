#include "spinbath/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spinbath/util.hpp"

namespace spinbath {

namespace {

// Reusable weighted-quantile on a sorted (energy, weight) view.
double weighted_quantile(const std::vector<std::size_t>& order,
                         const EnergySpectrum& spec, double total, double q) {
    const double target = q * total;
    double cum = 0.0;
    for (std::size_t idx : order) {
        cum += spec.weights[idx];
        if (cum >= target) return spec.energies[idx];
    }
    return spec.energies[order.back()];
}

}  // namespace

EnergySpectrum enumerate_spectrum(const Environment& env, bool merge_degenerate,
                                  std::size_t max_spins, double merge_tolerance) {
    const std::size_t n = env.size();
    if (n > max_spins) {
        throw std::length_error("enumerate_spectrum: environment of " + std::to_string(n) +
                                " spins exceeds cap " + std::to_string(max_spins));
    }
    if (merge_tolerance < 0.0) {
        throw std::invalid_argument("enumerate_spectrum: merge_tolerance must be >= 0");
    }

    const std::size_t count = std::size_t{1} << n;
    EnergySpectrum spec;
    spec.energies.assign(count, 0.0);
    spec.weights.assign(count, 1.0);

    // Level doubling over spins. After processing spin k the first 2^(k+1)
    // slots hold every sign pattern of spins [0..k]; slot s reads off its
    // pattern from the bits of s. Reading slot s before overwriting it keeps
    // the pass in place.
    std::size_t filled = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const double g = env[k].g();
        const double p = env[k].p_up();
        const double q = env[k].p_down();
        for (std::size_t s = 0; s < filled; ++s) {
            spec.energies[s + filled] = spec.energies[s] - g;
            spec.weights[s + filled] = spec.weights[s] * q;
            spec.energies[s] += g;
            spec.weights[s] *= p;
        }
        filled <<= 1;
    }

    if (merge_degenerate) {
        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (spec.energies[a] != spec.energies[b]) return spec.energies[a] < spec.energies[b];
            return a < b;  // deterministic tie-break fixes the weight-add order
        });
        std::vector<double> merged_e;
        std::vector<double> merged_w;
        merged_e.reserve(count);
        merged_w.reserve(count);
        for (std::size_t idx : order) {
            const double e = spec.energies[idx];
            if (!merged_e.empty() && e - merged_e.back() <= merge_tolerance) {
                merged_w.back() += spec.weights[idx];
            } else {
                merged_e.push_back(e);
                merged_w.push_back(spec.weights[idx]);
            }
        }
        spec.energies = std::move(merged_e);
        spec.weights = std::move(merged_w);
        spec.merged = true;
    }
    return spec;
}

complexd characteristic_function(const EnergySpectrum& spec, double t) {
    NeumaierSum re;
    NeumaierSum im;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double phase = spec.energies[i] * t;
        re.add(spec.weights[i] * std::cos(phase));
        im.add(spec.weights[i] * std::sin(phase));
    }
    return complexd(re.value(), im.value());
}

SpectrumMoments spectrum_moments(const EnergySpectrum& spec) {
    NeumaierSum mean_sum;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        mean_sum.add(spec.weights[i] * spec.energies[i]);
    }
    SpectrumMoments m;
    m.mean = mean_sum.value();
    NeumaierSum var_sum;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double d = spec.energies[i] - m.mean;
        var_sum.add(spec.weights[i] * d * d);
    }
    m.variance = var_sum.value();
    return m;
}

GaussianSpectrumParams gaussian_params(const Environment& env) {
    NeumaierSum mean;
    NeumaierSum var;
    for (const BathSpin& s : env) {
        const double p = s.p_up();
        const double q = s.p_down();
        mean.add((p - q) * s.g());
        var.add(4.0 * p * q * s.g() * s.g());
    }
    GaussianSpectrumParams out;
    out.mean = mean.value();
    out.std = std::sqrt(std::max(0.0, var.value()));
    return out;
}

complexd gaussian_r_approx(const GaussianSpectrumParams& params, double t) {
    const double modulus = std::exp(-0.5 * params.std * params.std * t * t);
    return std::polar(modulus, params.mean * t);
}

double ldos_gaussian_envelope(const GaussianSpectrumParams& params, double energy) {
    if (!(params.std > 0.0)) {
        throw std::domain_error("ldos_gaussian_envelope: degenerate distribution (std == 0)");
    }
    const double z = (energy - params.mean) / params.std;
    return std::exp(-0.5 * z * z) / (params.std * std::sqrt(2.0 * std::numbers::pi));
}

double lindeberg_diagnostic(const Environment& env) {
    const GaussianSpectrumParams params = gaussian_params(env);
    if (!(params.std > 0.0)) {
        throw std::domain_error("lindeberg_diagnostic: cumulative variance is zero");
    }
    double max_step = 0.0;
    for (const BathSpin& s : env) {
        const double a = (s.p_up() - s.p_down()) * s.g();
        max_step = std::max(max_step, std::abs(s.g() - a));
    }
    return max_step / params.std;
}

Histogram ldos_histogram(const EnergySpectrum& spec, std::size_t bins) {
    if (spec.size() == 0) {
        throw std::invalid_argument("ldos_histogram: empty spectrum");
    }
    const auto [min_it, max_it] = std::minmax_element(spec.energies.begin(), spec.energies.end());
    const double lo = *min_it;
    const double hi = *max_it;
    const double range = hi - lo;

    Histogram hist;
    if (range == 0.0) {
        // Point mass; unit-width bin keeps the density integrable.
        hist.bin_width = 1.0;
        hist.centers = {lo};
        hist.densities = {std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0)};
        return hist;
    }

    std::size_t n_bins = bins;
    if (n_bins == 0) {
        std::vector<std::size_t> order(spec.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (spec.energies[a] != spec.energies[b]) return spec.energies[a] < spec.energies[b];
            return a < b;
        });
        const double total = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
        const double iqr = weighted_quantile(order, spec, total, 0.75) -
                           weighted_quantile(order, spec, total, 0.25);
        const double fd_width = 2.0 * iqr / std::cbrt(static_cast<double>(spec.size()));
        if (fd_width > 0.0) {
            n_bins = static_cast<std::size_t>(std::ceil(range / fd_width));
        } else {
            n_bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(spec.size()))));
        }
        n_bins = std::clamp<std::size_t>(n_bins, 1, 1u << 20);
    }

    hist.bin_width = range / static_cast<double>(n_bins);
    hist.centers.resize(n_bins);
    hist.densities.assign(n_bins, 0.0);
    for (std::size_t i = 0; i < n_bins; ++i) {
        hist.centers[i] = lo + (static_cast<double>(i) + 0.5) * hist.bin_width;
    }
    for (std::size_t i = 0; i < spec.size(); ++i) {
        auto bin = static_cast<std::size_t>((spec.energies[i] - lo) / hist.bin_width);
        if (bin >= n_bins) bin = n_bins - 1;
        hist.densities[bin] += spec.weights[i];
    }
    for (double& d : hist.densities) d /= hist.bin_width;
    return hist;
}

}  // namespace spinbath
