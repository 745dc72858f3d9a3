#pragma once

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <exception>
#include <functional>
#include <string_view>
#include <thread>
#include <vector>

namespace spinbath {

/// Neumaier-compensated accumulator. Used wherever a sum over many terms
/// feeds a tight tolerance (spectrum moments, ensemble means).
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Evenly spaced grid over [start, stop]. The last point is pinned to
/// `stop` exactly so grids are reproducible endpoints included.
inline std::vector<double> linspace(double start, double stop, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    if (count == 0) return out;
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(start + step * static_cast<double>(i));
    }
    out.back() = stop;
    return out;
}

/// Log-spaced grid over [start, stop], start > 0.
inline std::vector<double> logspace(double start, double stop, std::size_t count) {
    std::vector<double> out = linspace(std::log(start), std::log(stop), count);
    for (double& v : out) v = std::exp(v);
    if (!out.empty()) {
        out.front() = start;
        out.back() = stop;
    }
    return out;
}

/// Runs `body(begin, end)` over contiguous chunks of [0, n). Each index is
/// visited exactly once by exactly one worker, so outputs written per-index
/// are identical for any thread count. Exceptions from workers are rethrown.
inline void parallel_for_chunks(std::size_t n, unsigned threads,
                                const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    std::size_t workers = threads == 0 ? 1 : threads;
    if (workers > n) workers = n;
    if (workers == 1) {
        body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// FNV-1a 64-bit hash, used for artifact fingerprints in run manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace spinbath
