#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spinbath {

using complexd = std::complex<double>;

/// Tolerance for state-normalization checks at construction. Violations are
/// caller bugs and throw; amplitudes are never renormalized silently.
inline constexpr double kNormTolerance = 1e-12;

/// Default cap on the number of spins accepted by the 2^N brute-force
/// expansion (and by spectrum enumeration).
inline constexpr std::size_t kDefaultExpansionCap = 20;

/// Qubit amplitudes (a, b) on the pointer basis. |a|^2 + |b|^2 must be 1
/// within kNormTolerance.
class SystemState {
public:
    SystemState(complexd a, complexd b);

    complexd a() const { return a_; }
    complexd b() const { return b_; }
    double p0() const { return std::norm(a_); }
    double p1() const { return std::norm(b_); }

private:
    complexd a_;
    complexd b_;
};

/// One environment spin: coupling g (energy units, hbar = 1) and initial
/// amplitudes (alpha, beta) on its up/down basis.
class BathSpin {
public:
    BathSpin(double g, complexd alpha, complexd beta);

    /// Spin with real amplitudes sqrt(p_up), sqrt(1 - p_up) and zero phases.
    static BathSpin from_probability(double g, double p_up);

    double g() const { return g_; }
    complexd alpha() const { return alpha_; }
    complexd beta() const { return beta_; }
    double p_up() const { return std::norm(alpha_); }
    double p_down() const { return std::norm(beta_); }

private:
    double g_;
    complexd alpha_;
    complexd beta_;
};

/// Ordered collection of bath spins. Empty environments are legal and give
/// identity dynamics (decoherence factor 1 at all times).
class Environment {
public:
    Environment() = default;
    explicit Environment(std::vector<BathSpin> spins) : spins_(std::move(spins)) {}

    std::size_t size() const { return spins_.size(); }
    bool empty() const { return spins_.empty(); }
    const BathSpin& operator[](std::size_t i) const { return spins_[i]; }
    auto begin() const { return spins_.begin(); }
    auto end() const { return spins_.end(); }
    const std::vector<BathSpin>& spins() const { return spins_; }

private:
    std::vector<BathSpin> spins_;
};

/// Two independent environments acting on the same qubit compose by
/// concatenation; the decoherence factor factorizes over the pieces.
Environment concat(const Environment& first, const Environment& second);

/// Complex decoherence factor sampled on a time grid.
struct DecoherenceSeries {
    std::vector<double> times;
    std::vector<complexd> values;
};

/// 2x2 reduced density matrix. Construction checks hermiticity, unit trace
/// and positive semidefiniteness (within kNormTolerance).
class DensityMatrix2 {
public:
    DensityMatrix2(complexd rho00, complexd rho01, complexd rho10, complexd rho11);

    complexd rho00() const { return rho00_; }
    complexd rho01() const { return rho01_; }
    complexd rho10() const { return rho10_; }
    complexd rho11() const { return rho11_; }

    /// Smaller eigenvalue of the (hermitian) matrix.
    double eigen_min() const;

private:
    complexd rho00_, rho01_, rho10_, rho11_;
};

/// Decoherence factor r(t) = prod_k (|alpha_k|^2 e^{i g_k t} + |beta_k|^2 e^{-i g_k t}).
/// Linear in the number of spins. Returns exactly 1 for t == 0 or an empty
/// environment. Throws std::domain_error for non-finite t.
complexd decoherence_factor(const Environment& env, double t);

/// Brute-force evaluation of r(t) as the sum of all 2^N phase-rotating
/// terms. Exists as an independent oracle for decoherence_factor; cost is
/// O(N 2^N). Throws std::length_error when the environment exceeds
/// max_spins.
complexd decoherence_factor_expansion(const Environment& env, double t,
                                      std::size_t max_spins = kDefaultExpansionCap);

/// r(t) evaluated over a grid. Grid points are independent; with threads > 1
/// they are computed in parallel with per-index writes, so results do not
/// depend on the thread count.
DecoherenceSeries decoherence_series(const Environment& env, std::span<const double> times,
                                     unsigned threads = 1);

/// Reduced density matrix of the qubit at time t: diagonal is (|a|^2, |b|^2),
/// off-diagonal is a conj(b) r(t).
DensityMatrix2 reduced_density_matrix(const SystemState& sys, const Environment& env, double t);

/// Analytic long-time average of |r(t)|^2:
/// 2^{-N} prod_k (1 + (|alpha_k|^2 - |beta_k|^2)^2).
double long_time_avg_sq(const Environment& env);

}  // namespace spinbath
