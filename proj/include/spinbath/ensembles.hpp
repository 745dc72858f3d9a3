#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "spinbath/model.hpp"

namespace spinbath {

/// Family of coupling distributions. Sampling transforms are pinned in this
/// module (inverse CDF / Box-Muller on a fixed uniform mapping) so that a
/// given seed reproduces the same couplings on any platform.
class CouplingDistribution {
public:
    enum class Kind { Uniform, Gaussian, Exponential, Lorentzian };

    static CouplingDistribution uniform(double lo, double hi);
    static CouplingDistribution gaussian(double mu, double sigma);
    static CouplingDistribution exponential(double rate);
    /// Heavy-tailed; sampled via the tan transform, tails unclipped.
    static CouplingDistribution lorentzian(double center, double gamma);

    Kind kind() const { return kind_; }
    /// First parameter: lo / mu / rate / center.
    double param0() const { return p0_; }
    /// Second parameter: hi / sigma / unused(0) / gamma.
    double param1() const { return p1_; }

    double sample(std::mt19937_64& rng) const;

private:
    CouplingDistribution(Kind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}
    Kind kind_;
    double p0_;
    double p1_;
};

/// Seeded ensemble description: M environments of N spins with i.i.d.
/// couplings and a uniform up-probability across spins.
struct EnsembleSpec {
    EnsembleSpec(CouplingDistribution dist, int n_spins, int n_realizations,
                 std::uint64_t seed, double p_up = 0.5);

    CouplingDistribution dist;
    int n_spins;
    int n_realizations;
    std::uint64_t seed;
    double p_up;
};

/// Per-time statistics of r(t) across an ensemble. mean_r is the complex
/// arithmetic mean; mean_abs is the mean of moduli (both are exposed since
/// either may be the quantity of interest). std_* are sample standard
/// deviations (zero when M == 1).
struct EnsembleStats {
    std::vector<double> times;
    std::vector<complexd> mean_r;
    std::vector<double> std_re;
    std::vector<double> std_im;
    std::vector<double> mean_abs;
    std::vector<double> std_abs;
};

/// Realization `index` of the ensemble. Deterministic: the couplings are a
/// pure function of (spec.seed, index), independent of evaluation order, so
/// realizations can be generated concurrently.
Environment sample_environment(const EnsembleSpec& spec, int realization_index);

/// Ensemble statistics of r(t) on a time grid. Realizations are evaluated
/// (possibly in parallel) into per-index slots and reduced in index order,
/// so the result is byte-identical for any thread count.
EnsembleStats ensemble_average_r(const EnsembleSpec& spec, std::span<const double> times,
                                 unsigned threads = 1);

}  // namespace spinbath
