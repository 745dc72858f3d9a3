#pragma once

#include <span>
#include <vector>

namespace spinbath {

enum class DecayModel { Gaussian, Exponential };
enum class DecayClass { Gaussian, Exponential, Ambiguous };

/// Fit window [t_lo, t_hi], inclusive on both ends.
struct FitWindow {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

/// Log-domain least-squares decay fit: amplitude * exp(-(t/timescale)^2)
/// for the Gaussian model, amplitude * exp(-t/timescale) for the
/// exponential one. timescale is +infinity when the window shows no decay.
/// residual_rms is the RMS misfit of ln(value) over the window.
struct DecayFit {
    DecayModel model = DecayModel::Gaussian;
    double timescale = 0.0;
    double amplitude = 0.0;
    double residual_rms = 0.0;
    FitWindow window;
};

/// Both candidate fits plus the verdict (smaller log-domain residual wins;
/// indistinguishable residuals report Ambiguous).
struct DecayClassification {
    DecayClass verdict = DecayClass::Ambiguous;
    DecayFit gaussian;
    DecayFit exponential;
};

/// Ordinary least-squares line with the standard error of the slope.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double std_error = 0.0;
    FitWindow window;
};

/// Fits the chosen decay model over the window. NaN samples are treated as
/// masked and skipped. Throws std::domain_error on nonpositive values in
/// the window and std::invalid_argument when fewer than 5 usable points
/// remain or the window is malformed.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   DecayModel model, FitWindow window);

DecayClassification classify_decay(std::span<const double> times,
                                   std::span<const double> values, FitWindow window);

/// Stretched-exponent extraction: regresses ln(-ln d) on ln(t) for a
/// normalized deficit series d(t) in (0, 1), so d = exp(-(t/T)^p) yields
/// slope exactly p. Throws std::domain_error when a sample in the window
/// lies outside (0, 1).
SlopeFit loglog_slope(std::span<const double> times, std::span<const double> deficit,
                      FitWindow window);

/// Raw log-log regression ln(d) on ln(t); curvature in this plane is what a
/// stretched exponential looks like before the extra log.
SlopeFit loglog_slope_raw(std::span<const double> times, std::span<const double> deficit,
                          FitWindow window);

/// RMS of the samples over the window (NaN samples skipped); the long-time
/// plateau estimator for |r|.
double saturation_level(std::span<const double> times, std::span<const double> values,
                        FitWindow window);

/// Pointwise numer/denom on a shared grid. Points with zero denominator are
/// masked (NaN) rather than raising; downstream fits skip masked points.
std::vector<double> series_ratio(std::span<const double> numer, std::span<const double> denom);

/// Default fit window: starts at the first e-folding of the series and ends
/// at the onset of saturation (first sample below 3x the tail RMS). Falls
/// back to the full grid when either edge cannot be detected.
FitWindow default_fit_window(std::span<const double> times, std::span<const double> values);

}  // namespace spinbath
