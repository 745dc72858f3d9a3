#include "spinbath/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spinbath/rng.hpp"
#include "spinbath/util.hpp"

namespace spinbath {

CouplingDistribution CouplingDistribution::uniform(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("uniform distribution requires hi > lo");
    return CouplingDistribution(Kind::Uniform, lo, hi);
}

CouplingDistribution CouplingDistribution::gaussian(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian distribution requires sigma > 0");
    return CouplingDistribution(Kind::Gaussian, mu, sigma);
}

CouplingDistribution CouplingDistribution::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential distribution requires rate > 0");
    return CouplingDistribution(Kind::Exponential, rate, 0.0);
}

CouplingDistribution CouplingDistribution::lorentzian(double center, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("lorentzian distribution requires gamma > 0");
    return CouplingDistribution(Kind::Lorentzian, center, gamma);
}

double CouplingDistribution::sample(std::mt19937_64& rng) const {
    switch (kind_) {
        case Kind::Uniform: {
            return p0_ + (p1_ - p0_) * uniform01(rng);
        }
        case Kind::Gaussian: {
            // Box-Muller; 1 - u keeps the log argument in (0, 1].
            const double u1 = 1.0 - uniform01(rng);
            const double u2 = uniform01(rng);
            return p0_ + p1_ * std::sqrt(-2.0 * std::log(u1)) *
                             std::cos(2.0 * std::numbers::pi * u2);
        }
        case Kind::Exponential: {
            return -std::log(1.0 - uniform01(rng)) / p0_;
        }
        case Kind::Lorentzian: {
            return p0_ + p1_ * std::tan(std::numbers::pi * (uniform01(rng) - 0.5));
        }
    }
    throw std::logic_error("unreachable distribution kind");
}

EnsembleSpec::EnsembleSpec(CouplingDistribution dist_, int n_spins_, int n_realizations_,
                           std::uint64_t seed_, double p_up_)
    : dist(dist_), n_spins(n_spins_), n_realizations(n_realizations_), seed(seed_), p_up(p_up_) {
    if (n_spins < 1) throw std::invalid_argument("EnsembleSpec: n_spins must be >= 1");
    if (n_realizations < 1) throw std::invalid_argument("EnsembleSpec: n_realizations must be >= 1");
    if (!(p_up >= 0.0 && p_up <= 1.0)) throw std::invalid_argument("EnsembleSpec: p_up must lie in [0, 1]");
}

Environment sample_environment(const EnsembleSpec& spec, int realization_index) {
    if (realization_index < 0 || realization_index >= spec.n_realizations) {
        throw std::out_of_range("sample_environment: realization index " +
                                std::to_string(realization_index) + " outside [0, " +
                                std::to_string(spec.n_realizations) + ")");
    }
    std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(realization_index)));
    std::vector<BathSpin> spins;
    spins.reserve(static_cast<std::size_t>(spec.n_spins));
    for (int k = 0; k < spec.n_spins; ++k) {
        spins.push_back(BathSpin::from_probability(spec.dist.sample(rng), spec.p_up));
    }
    return Environment(std::move(spins));
}

EnsembleStats ensemble_average_r(const EnsembleSpec& spec, std::span<const double> times,
                                 unsigned threads) {
    const std::size_t n_times = times.size();
    const auto m = static_cast<std::size_t>(spec.n_realizations);

    std::vector<complexd> values(m * n_times);
    parallel_for_chunks(m, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Environment env = sample_environment(spec, static_cast<int>(i));
            for (std::size_t j = 0; j < n_times; ++j) {
                values[i * n_times + j] = decoherence_factor(env, times[j]);
            }
        }
    });

    EnsembleStats stats;
    stats.times.assign(times.begin(), times.end());
    stats.mean_r.resize(n_times);
    stats.std_re.resize(n_times);
    stats.std_im.resize(n_times);
    stats.mean_abs.resize(n_times);
    stats.std_abs.resize(n_times);

    // Index-order reduction, independent of how the slots were filled.
    for (std::size_t j = 0; j < n_times; ++j) {
        NeumaierSum sum_re, sum_im, sum_abs;
        for (std::size_t i = 0; i < m; ++i) {
            const complexd v = values[i * n_times + j];
            sum_re.add(v.real());
            sum_im.add(v.imag());
            sum_abs.add(std::abs(v));
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        const complexd mean(sum_re.value() * inv_m, sum_im.value() * inv_m);
        const double mean_abs = sum_abs.value() * inv_m;
        stats.mean_r[j] = mean;
        stats.mean_abs[j] = mean_abs;
        if (m > 1) {
            NeumaierSum var_re, var_im, var_abs;
            for (std::size_t i = 0; i < m; ++i) {
                const complexd v = values[i * n_times + j];
                var_re.add((v.real() - mean.real()) * (v.real() - mean.real()));
                var_im.add((v.imag() - mean.imag()) * (v.imag() - mean.imag()));
                var_abs.add((std::abs(v) - mean_abs) * (std::abs(v) - mean_abs));
            }
            const double inv_dof = 1.0 / static_cast<double>(m - 1);
            stats.std_re[j] = std::sqrt(var_re.value() * inv_dof);
            stats.std_im[j] = std::sqrt(var_im.value() * inv_dof);
            stats.std_abs[j] = std::sqrt(var_abs.value() * inv_dof);
        } else {
            stats.std_re[j] = 0.0;
            stats.std_im[j] = 0.0;
            stats.std_abs[j] = 0.0;
        }
    }
    return stats;
}

}  // namespace spinbath
