#include "spinbath/echo.hpp"

#include <cmath>
#include <stdexcept>

#include "spinbath/util.hpp"

namespace spinbath {

namespace {

double mu_from_net_factor(const SystemState& sys, const complexd& r_net) {
    const double p0 = sys.p0();
    const double p1 = sys.p1();
    return p0 * p0 + p1 * p1 + 2.0 * p0 * p1 * r_net.real();
}

double reversed_argument(double t_reversal, double t) {
    // 2 t_R - t; hits exactly 0 at t == 2 t_R (doubling is exact).
    return 2.0 * t_reversal - t;
}

}  // namespace

EchoExperiment::EchoExperiment(SystemState sys, Environment env_unreversed,
                               Environment env_reversed, double t_reversal)
    : sys_(std::move(sys)),
      unreversed_(std::move(env_unreversed)),
      reversed_(std::move(env_reversed)),
      t_reversal_(t_reversal) {
    if (!(std::isfinite(t_reversal_) && t_reversal_ >= 0.0)) {
        throw std::invalid_argument("EchoExperiment: t_reversal must be finite and >= 0");
    }
}

double EchoExperiment::mu_infinity() const {
    const double p0 = sys_.p0();
    const double p1 = sys_.p1();
    return p0 * p0 + p1 * p1;
}

double echo_fidelity(const EchoExperiment& exp, double t) {
    if (!(t >= 0.0)) {
        throw std::domain_error("echo_fidelity: t must be >= 0");
    }
    const double s = t < exp.t_reversal() ? t : reversed_argument(exp.t_reversal(), t);
    const complexd r_net =
        decoherence_factor(exp.unreversed(), t) * decoherence_factor(exp.reversed(), s);
    return mu_from_net_factor(exp.system(), r_net);
}

double echo_fidelity_gaussian(const EchoExperiment& exp, double t) {
    if (!(t >= 0.0)) {
        throw std::domain_error("echo_fidelity_gaussian: t must be >= 0");
    }
    const GaussianSpectrumParams unrev = gaussian_params(exp.unreversed());
    const GaussianSpectrumParams rev = gaussian_params(exp.reversed());
    const double s = t < exp.t_reversal() ? t : reversed_argument(exp.t_reversal(), t);
    const complexd r_net = gaussian_r_approx(unrev, t) * gaussian_r_approx(rev, s);
    return mu_from_net_factor(exp.system(), r_net);
}

EchoReacquisition echo_at_reacquisition(const EchoExperiment& exp) {
    // Only the unreversed environment enters: the reversed factor is
    // exactly 1 at t = 2 t_R, so the result is bit-identical for any
    // env_reversed.
    const double t = 2.0 * exp.t_reversal();
    const complexd r_unrev = decoherence_factor(exp.unreversed(), t);
    EchoReacquisition out;
    out.mu = mu_from_net_factor(exp.system(), r_unrev);
    out.deficit = 1.0 - out.mu;
    out.gaussian_r_modulus = std::abs(gaussian_r_approx(gaussian_params(exp.unreversed()), t));
    return out;
}

EchoSeries echo_series(const EchoExperiment& exp, std::span<const double> times,
                       unsigned threads) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] < times[i - 1]) {
            throw std::invalid_argument("echo_series: time grid must be sorted ascending");
        }
    }
    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.mu.assign(times.size(), 1.0);
    parallel_for_chunks(times.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out.mu[i] = echo_fidelity(exp, out.times[i]);
        }
    });
    return out;
}

std::vector<double> echo_series_gaussian(const EchoExperiment& exp,
                                         std::span<const double> times) {
    const GaussianSpectrumParams unrev = gaussian_params(exp.unreversed());
    const GaussianSpectrumParams rev = gaussian_params(exp.reversed());
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0)) {
            throw std::domain_error("echo_series_gaussian: t must be >= 0");
        }
        const double s = t < exp.t_reversal() ? t : reversed_argument(exp.t_reversal(), t);
        const complexd r_net = gaussian_r_approx(unrev, t) * gaussian_r_approx(rev, s);
        out.push_back(mu_from_net_factor(exp.system(), r_net));
    }
    return out;
}

}  // namespace spinbath
