#include "spinbath/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spinbath/util.hpp"

namespace spinbath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct OlsResult {
    double slope = 0.0;
    double intercept = 0.0;
    double std_error = 0.0;
    double residual_rms = 0.0;
};

OlsResult ols(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    NeumaierSum sx, sy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    NeumaierSum sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
    }
    if (!(sxx.value() > 0.0)) {
        throw std::invalid_argument("ols: degenerate abscissa (all x equal)");
    }
    OlsResult r;
    r.slope = sxy.value() / sxx.value();
    r.intercept = my - r.slope * mx;
    NeumaierSum srr;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double resid = y[i] - (r.intercept + r.slope * x[i]);
        srr.add(resid * resid);
    }
    r.residual_rms = std::sqrt(srr.value() / n);
    r.std_error = x.size() > 2 ? std::sqrt(srr.value() / (n - 2.0) / sxx.value()) : 0.0;
    return r;
}

void check_window(FitWindow window) {
    if (!(window.t_hi > window.t_lo)) {
        throw std::invalid_argument("fit window requires t_hi > t_lo");
    }
}

void check_same_length(std::span<const double> times, std::span<const double> values,
                       const char* what) {
    if (times.size() != values.size()) {
        throw std::invalid_argument(std::string(what) + ": times and values differ in length");
    }
}

}  // namespace

DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   DecayModel model, FitWindow window) {
    check_window(window);
    check_same_length(times, values, "fit_decay");
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double v = values[i];
        if (t < window.t_lo || t > window.t_hi) continue;
        if (std::isnan(v)) continue;  // masked
        if (!(v > 0.0)) {
            throw std::domain_error("fit_decay: nonpositive value at t = " + std::to_string(t));
        }
        x.push_back(model == DecayModel::Gaussian ? t * t : t);
        y.push_back(std::log(v));
    }
    if (x.size() < 5) {
        throw std::invalid_argument("fit_decay: fewer than 5 usable points in window");
    }
    const OlsResult r = ols(x, y);
    DecayFit fit;
    fit.model = model;
    fit.window = window;
    fit.amplitude = std::exp(r.intercept);
    fit.residual_rms = r.residual_rms;
    if (r.slope < 0.0) {
        fit.timescale = model == DecayModel::Gaussian ? std::sqrt(-1.0 / r.slope) : -1.0 / r.slope;
    } else {
        fit.timescale = kInf;  // no decay in window
    }
    return fit;
}

DecayClassification classify_decay(std::span<const double> times,
                                   std::span<const double> values, FitWindow window) {
    DecayClassification out;
    out.gaussian = fit_decay(times, values, DecayModel::Gaussian, window);
    out.exponential = fit_decay(times, values, DecayModel::Exponential, window);
    const double rg = out.gaussian.residual_rms;
    const double re = out.exponential.residual_rms;
    const double tie = 1e-12 * std::max(1.0, std::max(rg, re));
    if (std::abs(rg - re) <= tie) {
        out.verdict = DecayClass::Ambiguous;
    } else {
        out.verdict = rg < re ? DecayClass::Gaussian : DecayClass::Exponential;
    }
    return out;
}

SlopeFit loglog_slope(std::span<const double> times, std::span<const double> deficit,
                      FitWindow window) {
    check_window(window);
    check_same_length(times, deficit, "loglog_slope");
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double d = deficit[i];
        if (t < window.t_lo || t > window.t_hi) continue;
        if (std::isnan(d)) continue;
        if (!(t > 0.0)) {
            throw std::domain_error("loglog_slope: window must contain only t > 0");
        }
        if (!(d > 0.0 && d < 1.0)) {
            throw std::domain_error("loglog_slope: deficit must lie in (0, 1), got " +
                                    std::to_string(d) + " at t = " + std::to_string(t));
        }
        x.push_back(std::log(t));
        y.push_back(std::log(-std::log(d)));
    }
    if (x.size() < 2) {
        throw std::invalid_argument("loglog_slope: fewer than 2 usable points in window");
    }
    const OlsResult r = ols(x, y);
    return SlopeFit{r.slope, r.intercept, r.std_error, window};
}

SlopeFit loglog_slope_raw(std::span<const double> times, std::span<const double> deficit,
                          FitWindow window) {
    check_window(window);
    check_same_length(times, deficit, "loglog_slope_raw");
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double d = deficit[i];
        if (t < window.t_lo || t > window.t_hi) continue;
        if (std::isnan(d)) continue;
        if (!(t > 0.0)) {
            throw std::invalid_argument("loglog_slope_raw: window must contain only t > 0");
        }
        if (!(d > 0.0)) {
            throw std::domain_error("loglog_slope_raw: deficit must be positive");
        }
        x.push_back(std::log(t));
        y.push_back(std::log(d));
    }
    if (x.size() < 2) {
        throw std::invalid_argument("loglog_slope_raw: fewer than 2 usable points in window");
    }
    const OlsResult r = ols(x, y);
    return SlopeFit{r.slope, r.intercept, r.std_error, window};
}

double saturation_level(std::span<const double> times, std::span<const double> values,
                        FitWindow window) {
    check_window(window);
    check_same_length(times, values, "saturation_level");
    NeumaierSum sum;
    std::size_t n = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window.t_lo || times[i] > window.t_hi) continue;
        if (std::isnan(values[i])) continue;
        sum.add(values[i] * values[i]);
        ++n;
    }
    if (n == 0) {
        throw std::invalid_argument("saturation_level: no samples in window");
    }
    return std::sqrt(sum.value() / static_cast<double>(n));
}

std::vector<double> series_ratio(std::span<const double> numer, std::span<const double> denom) {
    if (numer.size() != denom.size()) {
        throw std::invalid_argument("series_ratio: series differ in length");
    }
    std::vector<double> out(numer.size());
    for (std::size_t i = 0; i < numer.size(); ++i) {
        out[i] = denom[i] == 0.0 ? kNaN : numer[i] / denom[i];
    }
    return out;
}

FitWindow default_fit_window(std::span<const double> times, std::span<const double> values) {
    check_same_length(times, values, "default_fit_window");
    if (times.size() < 2) {
        throw std::invalid_argument("default_fit_window: need at least 2 samples");
    }
    double peak = 0.0;
    for (double v : values) {
        if (!std::isnan(v)) peak = std::max(peak, std::abs(v));
    }
    FitWindow window{times.front(), times.back()};
    if (peak == 0.0) return window;

    // Tail RMS over the last tenth of the grid estimates the plateau.
    const std::size_t tail_start = times.size() - std::max<std::size_t>(times.size() / 10, 2);
    NeumaierSum tail;
    std::size_t tail_n = 0;
    for (std::size_t i = tail_start; i < times.size(); ++i) {
        if (std::isnan(values[i])) continue;
        tail.add(values[i] * values[i]);
        ++tail_n;
    }
    const double sat = tail_n > 0 ? std::sqrt(tail.value() / static_cast<double>(tail_n)) : 0.0;

    const double lo_level = peak * std::exp(-1.0);
    const double hi_level = 3.0 * sat;
    double t_lo = times.front();
    double t_hi = times.back();
    bool lo_found = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::isnan(values[i])) continue;
        if (!lo_found && std::abs(values[i]) < lo_level) {
            t_lo = times[i];
            lo_found = true;
        }
        if (lo_found && std::abs(values[i]) < hi_level) {
            t_hi = times[i];
            break;
        }
    }
    if (!(t_hi > t_lo)) {
        return FitWindow{times.front(), times.back()};
    }
    return FitWindow{t_lo, t_hi};
}

}  // namespace spinbath
