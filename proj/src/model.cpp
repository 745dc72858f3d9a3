#include "spinbath/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinbath/util.hpp"

namespace spinbath {

namespace {

void check_normalized(double total, const char* what) {
    // The negated comparison also catches NaN amplitudes.
    if (!(std::abs(total - 1.0) <= kNormTolerance)) {
        throw std::invalid_argument(std::string(what) +
                                    ": amplitudes not normalized, |.|^2 sum = " +
                                    std::to_string(total));
    }
}

}  // namespace

SystemState::SystemState(complexd a, complexd b) : a_(a), b_(b) {
    check_normalized(std::norm(a_) + std::norm(b_), "SystemState");
}

BathSpin::BathSpin(double g, complexd alpha, complexd beta)
    : g_(g), alpha_(alpha), beta_(beta) {
    if (!std::isfinite(g_)) {
        throw std::invalid_argument("BathSpin: coupling must be finite");
    }
    check_normalized(std::norm(alpha_) + std::norm(beta_), "BathSpin");
}

BathSpin BathSpin::from_probability(double g, double p_up) {
    if (!(p_up >= 0.0 && p_up <= 1.0)) {
        throw std::invalid_argument("BathSpin: p_up must lie in [0, 1]");
    }
    return BathSpin(g, complexd(std::sqrt(p_up), 0.0), complexd(std::sqrt(1.0 - p_up), 0.0));
}

Environment concat(const Environment& first, const Environment& second) {
    std::vector<BathSpin> spins;
    spins.reserve(first.size() + second.size());
    spins.insert(spins.end(), first.begin(), first.end());
    spins.insert(spins.end(), second.begin(), second.end());
    return Environment(std::move(spins));
}

DensityMatrix2::DensityMatrix2(complexd rho00, complexd rho01, complexd rho10, complexd rho11)
    : rho00_(rho00), rho01_(rho01), rho10_(rho10), rho11_(rho11) {
    if (!(std::abs(rho01_ - std::conj(rho10_)) <= kNormTolerance) ||
        !(std::abs(rho00_.imag()) <= kNormTolerance) ||
        !(std::abs(rho11_.imag()) <= kNormTolerance)) {
        throw std::invalid_argument("DensityMatrix2: not hermitian");
    }
    const double trace = rho00_.real() + rho11_.real();
    if (!(std::abs(trace - 1.0) <= kNormTolerance)) {
        throw std::invalid_argument("DensityMatrix2: trace != 1");
    }
    if (!(eigen_min() >= -kNormTolerance)) {
        throw std::invalid_argument("DensityMatrix2: negative eigenvalue");
    }
}

double DensityMatrix2::eigen_min() const {
    const double half_trace = 0.5 * (rho00_.real() + rho11_.real());
    const double half_diff = 0.5 * (rho00_.real() - rho11_.real());
    const double radius = std::sqrt(half_diff * half_diff + std::norm(rho01_));
    return half_trace - radius;
}

complexd decoherence_factor(const Environment& env, double t) {
    if (!std::isfinite(t)) {
        throw std::domain_error("decoherence_factor: t must be finite");
    }
    if (t == 0.0 || env.empty()) {
        return complexd(1.0, 0.0);
    }
    // Each factor is (p + q) cos(g t) + i (p - q) sin(g t); written this way
    // the conjugation symmetry r(-t) = conj(r(t)) holds bit-exactly.
    complexd r(1.0, 0.0);
    for (const BathSpin& s : env) {
        const double p = s.p_up();
        const double q = s.p_down();
        const double phase = s.g() * t;
        r *= complexd((p + q) * std::cos(phase), (p - q) * std::sin(phase));
    }
    return r;
}

complexd decoherence_factor_expansion(const Environment& env, double t, std::size_t max_spins) {
    if (!std::isfinite(t)) {
        throw std::domain_error("decoherence_factor_expansion: t must be finite");
    }
    const std::size_t n = env.size();
    if (n > max_spins) {
        throw std::length_error("decoherence_factor_expansion: environment of " +
                                std::to_string(n) + " spins exceeds cap " +
                                std::to_string(max_spins));
    }
    // Deliberately recomputes every walk from scratch; this keeps the oracle
    // independent of the product form and of the spectrum enumeration.
    const std::uint64_t walks = std::uint64_t{1} << n;
    NeumaierSum re;
    NeumaierSum im;
    for (std::uint64_t mask = 0; mask < walks; ++mask) {
        double energy = 0.0;
        double weight = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const BathSpin& s = env[k];
            if (mask & (std::uint64_t{1} << k)) {
                energy -= s.g();
                weight *= s.p_down();
            } else {
                energy += s.g();
                weight *= s.p_up();
            }
        }
        re.add(weight * std::cos(energy * t));
        im.add(weight * std::sin(energy * t));
    }
    return complexd(re.value(), im.value());
}

DecoherenceSeries decoherence_series(const Environment& env, std::span<const double> times,
                                     unsigned threads) {
    DecoherenceSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.assign(times.size(), complexd(0.0, 0.0));
    parallel_for_chunks(times.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out.values[i] = decoherence_factor(env, out.times[i]);
        }
    });
    return out;
}

DensityMatrix2 reduced_density_matrix(const SystemState& sys, const Environment& env, double t) {
    const complexd off = sys.a() * std::conj(sys.b()) * decoherence_factor(env, t);
    return DensityMatrix2(complexd(sys.p0(), 0.0), off, std::conj(off), complexd(sys.p1(), 0.0));
}

double long_time_avg_sq(const Environment& env) {
    double prod = 1.0;
    for (const BathSpin& s : env) {
        const double d = s.p_up() - s.p_down();
        prod *= 1.0 + d * d;
    }
    return std::ldexp(prod, -static_cast<int>(env.size()));
}

}  // namespace spinbath
