#pragma once

#include <span>
#include <vector>

#include "spinbath/model.hpp"
#include "spinbath/spectrum.hpp"

namespace spinbath {

/// A partial Loschmidt echo: the qubit couples to two disjoint environments;
/// at t_reversal the coupling to env_reversed flips sign while env_unreversed
/// keeps running. Either environment may be empty (an empty env_unreversed is
/// a complete reversal).
class EchoExperiment {
public:
    EchoExperiment(SystemState sys, Environment env_unreversed, Environment env_reversed,
                   double t_reversal);

    const SystemState& system() const { return sys_; }
    const Environment& unreversed() const { return unreversed_; }
    const Environment& reversed() const { return reversed_; }
    double t_reversal() const { return t_reversal_; }

    /// Fidelity plateau |a|^4 + |b|^4 reached once the net decoherence
    /// factor has decayed away.
    double mu_infinity() const;

private:
    SystemState sys_;
    Environment unreversed_;
    Environment reversed_;
    double t_reversal_;
};

/// Echo fidelity per time on a grid; values lie in [0, 1] up to rounding.
struct EchoSeries {
    std::vector<double> times;
    std::vector<double> mu;
};

/// Fidelity at the reacquisition instant t = 2 t_reversal, where the
/// reversed environment has rewound completely and only the unreversed one
/// contributes. gaussian_r_modulus is the closed-form prediction
/// exp(-std'^2 (2 t_R)^2 / 2) for the surviving decoherence factor.
struct EchoReacquisition {
    double mu = 1.0;
    double deficit = 0.0;
    double gaussian_r_modulus = 1.0;
};

/// Fidelity mu(t) = |a|^4 + |b|^4 + 2 |ab|^2 Re[r'(t) r''(s)] with s = t
/// before the reversal and s = 2 t_R - t after it. Throws std::domain_error
/// for t < 0.
double echo_fidelity(const EchoExperiment& exp, double t);

/// Same piecewise formula with both factors replaced by their Gaussian
/// approximants; the closed-form prediction alongside the exact dynamics.
double echo_fidelity_gaussian(const EchoExperiment& exp, double t);

/// mu(2 t_R) evaluated exactly through the product form. Depends only on
/// the unreversed environment and t_R: the reversed factor is identically 1
/// at reacquisition, whatever env_reversed is.
EchoReacquisition echo_at_reacquisition(const EchoExperiment& exp);

/// mu over an ascending grid (throws std::invalid_argument otherwise);
/// continuous at t_reversal by construction.
EchoSeries echo_series(const EchoExperiment& exp, std::span<const double> times,
                       unsigned threads = 1);

/// Gaussian-model prediction of mu on the same grid.
std::vector<double> echo_series_gaussian(const EchoExperiment& exp, std::span<const double> times);

}  // namespace spinbath
