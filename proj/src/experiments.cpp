#include "spinbath/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "spinbath/analysis.hpp"
#include "spinbath/echo.hpp"
#include "spinbath/ensembles.hpp"
#include "spinbath/io.hpp"
#include "spinbath/model.hpp"
#include "spinbath/spectrum.hpp"
#include "spinbath/util.hpp"

namespace spinbath {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw std::invalid_argument("field " + field + ": " + what);
}

std::string subfield(const std::string& ctx, const std::string& key) {
    return ctx.empty() ? key : ctx + "." + key;
}

const json& require_key(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.is_object()) field_error(ctx.empty() ? "(root)" : ctx, "expected an object");
    if (!obj.contains(key)) field_error(subfield(ctx, key), "missing");
    return obj.at(key);
}

double get_number(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_key(obj, key, ctx);
    if (!v.is_number()) field_error(subfield(ctx, key), "expected a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const char* key, const std::string& ctx, double fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return get_number(obj, key, ctx);
}

std::int64_t get_integer(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_key(obj, key, ctx);
    if (!v.is_number_integer()) field_error(subfield(ctx, key), "expected an integer");
    return v.get<std::int64_t>();
}

std::int64_t get_integer_or(const json& obj, const char* key, const std::string& ctx,
                            std::int64_t fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return get_integer(obj, key, ctx);
}

bool get_bool_or(const json& obj, const char* key, const std::string& ctx, bool fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) field_error(subfield(ctx, key), "expected a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_key(obj, key, ctx);
    if (!v.is_string()) field_error(subfield(ctx, key), "expected a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& obj, const char* key, const std::string& ctx,
                          const std::string& fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return get_string(obj, key, ctx);
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed, std::vector<std::string>& out) {
    if (!obj.is_object()) return;
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            out.push_back("field " + subfield(ctx, key) + ": unknown key");
        }
    }
}

CouplingDistribution coupling_from(const json& obj, const std::string& ctx) {
    const std::string kind = get_string(obj, "kind", ctx);
    if (kind == "uniform") {
        return CouplingDistribution::uniform(get_number(obj, "lo", ctx),
                                             get_number(obj, "hi", ctx));
    }
    if (kind == "gaussian") {
        return CouplingDistribution::gaussian(get_number(obj, "mu", ctx),
                                              get_number(obj, "sigma", ctx));
    }
    if (kind == "exponential") {
        return CouplingDistribution::exponential(get_number(obj, "rate", ctx));
    }
    if (kind == "lorentzian") {
        return CouplingDistribution::lorentzian(get_number(obj, "center", ctx),
                                                get_number(obj, "gamma", ctx));
    }
    field_error(subfield(ctx, "kind"), "unknown distribution: " + kind);
}

void check_coupling_keys(const json& obj, const std::string& ctx, std::vector<std::string>& out) {
    if (!obj.is_object()) return;
    const std::string kind = obj.contains("kind") && obj["kind"].is_string()
                                 ? obj["kind"].get<std::string>()
                                 : "";
    if (kind == "uniform") {
        check_keys(obj, ctx, {"kind", "lo", "hi"}, out);
    } else if (kind == "gaussian") {
        check_keys(obj, ctx, {"kind", "mu", "sigma"}, out);
    } else if (kind == "exponential") {
        check_keys(obj, ctx, {"kind", "rate"}, out);
    } else if (kind == "lorentzian") {
        check_keys(obj, ctx, {"kind", "center", "gamma"}, out);
    }
}

// An environment is given by a file path, an inline spin list, or a sampled
// spec {n_spins, p_up, coupling, stream}; sampling stream s of master seed
// `seed` reproduces the same spins for any thread count or call order.
Environment environment_from(const json& obj, std::uint64_t seed, std::uint64_t default_stream,
                             const std::string& ctx) {
    if (!obj.is_object()) field_error(ctx, "expected an object");
    if (obj.contains("file")) {
        return load_environment(get_string(obj, "file", ctx));
    }
    if (obj.contains("spins")) {
        try {
            return environment_from_json(obj.at("spins"));
        } catch (const std::invalid_argument& e) {
            field_error(subfield(ctx, "spins"), e.what());
        }
    }
    if (obj.contains("n_spins")) {
        const std::int64_t n = get_integer(obj, "n_spins", ctx);
        if (n < 1) field_error(subfield(ctx, "n_spins"), "must be >= 1");
        const double p_up = get_number_or(obj, "p_up", ctx, 0.5);
        const std::int64_t stream =
            get_integer_or(obj, "stream", ctx, static_cast<std::int64_t>(default_stream));
        if (stream < 0) field_error(subfield(ctx, "stream"), "must be >= 0");
        const CouplingDistribution dist = coupling_from(require_key(obj, "coupling", ctx), subfield(ctx, "coupling"));
        EnsembleSpec spec(dist, static_cast<int>(n), static_cast<int>(stream) + 1, seed, p_up);
        return sample_environment(spec, static_cast<int>(stream));
    }
    field_error(ctx, "needs one of: file, spins, n_spins");
}

void check_environment_keys(const json& obj, const std::string& ctx,
                            std::vector<std::string>& out) {
    if (!obj.is_object()) return;
    if (obj.contains("file")) {
        check_keys(obj, ctx, {"file"}, out);
    } else if (obj.contains("spins")) {
        check_keys(obj, ctx, {"spins"}, out);
    } else {
        check_keys(obj, ctx, {"n_spins", "p_up", "coupling", "stream"}, out);
        if (obj.contains("coupling")) check_coupling_keys(obj["coupling"], subfield(ctx, "coupling"), out);
    }
}

SystemState system_from(const json& parent, const std::string& ctx) {
    if (!parent.is_object() || !parent.contains("system")) {
        return SystemState(complexd(std::sqrt(0.5), 0.0), complexd(std::sqrt(0.5), 0.0));
    }
    const json& obj = parent.at("system");
    const std::string sctx = subfield(ctx, "system");
    const double p0 = get_number(obj, "p0", sctx);
    if (!(p0 >= 0.0 && p0 <= 1.0)) field_error(subfield(sctx, "p0"), "must lie in [0, 1]");
    const double phase_a = get_number_or(obj, "phase_a", sctx, 0.0);
    const double phase_b = get_number_or(obj, "phase_b", sctx, 0.0);
    return SystemState(std::polar(std::sqrt(p0), phase_a), std::polar(std::sqrt(1.0 - p0), phase_b));
}

std::vector<double> grid_from(const json& obj, const std::string& ctx) {
    if (!obj.is_object()) field_error(ctx, "expected an object");
    const std::string kind = get_string_or(obj, "kind", ctx, "linear");
    const double start = get_number(obj, "start", ctx);
    const double stop = get_number(obj, "stop", ctx);
    const std::int64_t count = get_integer(obj, "count", ctx);
    if (count < 2) field_error(subfield(ctx, "count"), "must be >= 2");
    if (!(stop > start)) field_error(subfield(ctx, "stop"), "must exceed start");
    if (kind == "linear") {
        return linspace(start, stop, static_cast<std::size_t>(count));
    }
    if (kind == "log") {
        if (!(start > 0.0)) field_error(subfield(ctx, "start"), "log grid needs start > 0");
        return logspace(start, stop, static_cast<std::size_t>(count));
    }
    field_error(subfield(ctx, "kind"), "unknown grid kind: " + kind);
}

FitWindow window_from(const json& obj, const std::string& ctx) {
    if (!obj.is_object()) field_error(ctx, "expected an object");
    FitWindow w{get_number(obj, "t_lo", ctx), get_number(obj, "t_hi", ctx)};
    if (!(w.t_hi > w.t_lo)) field_error(subfield(ctx, "t_hi"), "must exceed t_lo");
    return w;
}

std::uint64_t seed_from(const json& doc) {
    if (!doc.contains("seed")) return 0;
    const json& v = doc.at("seed");
    if (!v.is_number_integer()) field_error("seed", "expected an integer");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    const std::int64_t s = v.get<std::int64_t>();
    if (s < 0) field_error("seed", "must be >= 0");
    return static_cast<std::uint64_t>(s);
}

std::size_t expansion_cap_from(const json& doc) {
    const std::int64_t cap =
        get_integer_or(doc, "expansion_cap", "", static_cast<std::int64_t>(kDefaultExpansionCap));
    if (cap < 0) field_error("expansion_cap", "must be >= 0");
    return static_cast<std::size_t>(cap);
}

json gaussian_summary(const Environment& env) {
    const GaussianSpectrumParams params = gaussian_params(env);
    json j;
    j["mean"] = params.mean;
    j["std"] = params.std;
    j["lindeberg"] = params.std > 0.0 ? json(lindeberg_diagnostic(env)) : json(nullptr);
    return j;
}

std::vector<double> abs_values(const std::vector<complexd>& values) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](complexd v) { return std::abs(v); });
    return out;
}

struct Artifacts {
    std::filesystem::path dir;
    std::vector<std::string> names;

    std::filesystem::path file(const std::string& name) {
        names.push_back(name);
        return dir / name;
    }
};

void run_decoherence(const json& doc, unsigned threads, Artifacts& out) {
    const std::uint64_t seed = seed_from(doc);
    const Environment env = environment_from(require_key(doc, "environment", ""), seed, 0, "environment");
    const std::vector<double> times = grid_from(require_key(doc, "grid", ""), "grid");
    const DecoherenceSeries series = decoherence_series(env, times, threads);

    std::vector<CsvColumn> cols(4);
    cols[0].name = "t";
    cols[1].name = "re_r";
    cols[2].name = "im_r";
    cols[3].name = "abs_r";
    for (std::size_t i = 0; i < times.size(); ++i) {
        cols[0].data.push_back(series.times[i]);
        cols[1].data.push_back(series.values[i].real());
        cols[2].data.push_back(series.values[i].imag());
        cols[3].data.push_back(std::abs(series.values[i]));
    }
    const std::size_t cap = expansion_cap_from(doc);
    if (get_bool_or(doc, "compare_expansion", "", false)) {
        std::vector<complexd> expanded(times.size());
        parallel_for_chunks(times.size(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                expanded[i] = decoherence_factor_expansion(env, times[i], cap);
            }
        });
        CsvColumn re{"re_r_sum", {}};
        CsvColumn im{"im_r_sum", {}};
        for (const complexd v : expanded) {
            re.data.push_back(v.real());
            im.data.push_back(v.imag());
        }
        cols.push_back(std::move(re));
        cols.push_back(std::move(im));
    }
    write_csv(out.file("decoherence.csv"), cols);

    if (get_bool_or(doc, "write_walk", "", false)) {
        const EnergySpectrum spec = enumerate_spectrum(env, false, cap);
        write_csv(out.file("walk.csv"),
                  {{"energy", spec.energies}, {"weight", spec.weights}});
    }

    json summary;
    summary["n_spins"] = env.size();
    summary["long_time_avg_sq"] = long_time_avg_sq(env);
    summary["gaussian"] = gaussian_summary(env);
    save_json_file(summary, out.file("summary.json"));
}

void run_spectrum(const json& doc, unsigned /*threads*/, Artifacts& out) {
    const std::uint64_t seed = seed_from(doc);
    const Environment env = environment_from(require_key(doc, "environment", ""), seed, 0, "environment");
    const bool merge = get_bool_or(doc, "merge_degenerate", "", false);
    const double tol = get_number_or(doc, "merge_tolerance", "", 0.0);
    if (tol < 0.0) field_error("merge_tolerance", "must be >= 0");
    const std::size_t cap = expansion_cap_from(doc);
    const std::int64_t bins = get_integer_or(doc, "bins", "", 0);
    if (bins < 0) field_error("bins", "must be >= 0");

    const EnergySpectrum spec = enumerate_spectrum(env, merge, cap, tol);
    if (get_bool_or(doc, "write_points", "", true)) {
        write_csv(out.file("spectrum.csv"),
                  {{"energy", spec.energies}, {"weight", spec.weights}});
    }
    const Histogram hist = ldos_histogram(spec, static_cast<std::size_t>(bins));
    write_csv(out.file("histogram.csv"),
              {{"bin_center", hist.centers}, {"density", hist.densities}});

    const SpectrumMoments moments = spectrum_moments(spec);
    json summary;
    summary["n_spins"] = env.size();
    summary["n_points"] = spec.size();
    summary["merged"] = spec.merged;
    summary["moments"] = {{"mean", moments.mean}, {"variance", moments.variance}};
    summary["gaussian"] = gaussian_summary(env);
    summary["bin_width"] = hist.bin_width;
    save_json_file(summary, out.file("summary.json"));
}

void run_ensemble(const json& doc, unsigned threads, Artifacts& out) {
    const std::uint64_t seed = seed_from(doc);
    const json& ens = require_key(doc, "ensemble", "");
    const std::int64_t n = get_integer(ens, "n_spins", "ensemble");
    const std::int64_t m = get_integer(ens, "n_realizations", "ensemble");
    if (n < 1) field_error("ensemble.n_spins", "must be >= 1");
    if (m < 1) field_error("ensemble.n_realizations", "must be >= 1");
    const double p_up = get_number_or(ens, "p_up", "ensemble", 0.5);
    const CouplingDistribution dist =
        coupling_from(require_key(ens, "coupling", "ensemble"), "ensemble.coupling");
    const EnsembleSpec spec(dist, static_cast<int>(n), static_cast<int>(m), seed, p_up);
    const std::vector<double> times = grid_from(require_key(doc, "grid", ""), "grid");

    const EnsembleStats stats = ensemble_average_r(spec, times, threads);
    std::vector<double> abs_mean(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) abs_mean[i] = std::abs(stats.mean_r[i]);
    std::vector<double> mean_re(times.size()), mean_im(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        mean_re[i] = stats.mean_r[i].real();
        mean_im[i] = stats.mean_r[i].imag();
    }
    write_csv(out.file("ensemble.csv"), {{"t", stats.times},
                                         {"mean_re", mean_re},
                                         {"mean_im", mean_im},
                                         {"abs_mean", abs_mean},
                                         {"mean_abs", stats.mean_abs},
                                         {"std_re", stats.std_re},
                                         {"std_im", stats.std_im},
                                         {"std_abs", stats.std_abs}});

    if (doc.contains("fit")) {
        const json& fit = doc.at("fit");
        const std::string target = get_string_or(fit, "target", "fit", "abs_mean");
        const std::vector<double>* series = nullptr;
        if (target == "abs_mean") {
            series = &abs_mean;
        } else if (target == "mean_abs") {
            series = &stats.mean_abs;
        } else {
            field_error("fit.target", "must be abs_mean or mean_abs");
        }
        const FitWindow window = fit.contains("window")
                                     ? window_from(fit.at("window"), "fit.window")
                                     : default_fit_window(times, *series);
        json report = classification_to_json(classify_decay(times, *series, window));
        report["target"] = target;
        save_json_file(report, out.file("fit_report.json"));
    }
}

// Auto window for the reacquisition slope: the stretch of the sweep where
// the normalized excess has left 1 but not yet hit the noise of the plateau
// or its first zero crossing.
FitWindow auto_slope_window(const std::vector<double>& t_rev, const std::vector<double>& rho) {
    double t_lo = 0.0;
    double t_hi = 0.0;
    bool lo_found = false;
    for (std::size_t i = 0; i < t_rev.size(); ++i) {
        if (!(rho[i] > 0.0)) break;
        if (t_rev[i] <= 0.0) continue;
        if (!lo_found && rho[i] <= 0.98) {
            t_lo = t_rev[i];
            lo_found = true;
        }
        if (lo_found && rho[i] >= 0.02) t_hi = t_rev[i];
    }
    if (!lo_found || !(t_hi > t_lo)) {
        throw std::domain_error("slope window: sweep has no usable decay range");
    }
    return FitWindow{t_lo, t_hi};
}

void run_echo(const json& doc, unsigned threads, Artifacts& out) {
    const std::uint64_t seed = seed_from(doc);
    const SystemState sys = system_from(doc, "");
    const Environment unrev =
        environment_from(require_key(doc, "env_unreversed", ""), seed, 0, "env_unreversed");
    const Environment rev = doc.contains("env_reversed")
                                ? environment_from(doc.at("env_reversed"), seed, 1, "env_reversed")
                                : Environment();
    const bool series_mode = doc.contains("grid");
    const bool sweep_mode = doc.contains("reversal_grid");
    if (!series_mode && !sweep_mode) {
        field_error("grid", "echo needs a time grid, a reversal_grid sweep, or both");
    }

    json summary;
    summary["n_unreversed"] = unrev.size();
    summary["n_reversed"] = rev.size();

    if (series_mode) {
        const double t_rev = get_number(doc, "t_reversal", "");
        const EchoExperiment exp(sys, unrev, rev, t_rev);
        const std::vector<double> times = grid_from(doc.at("grid"), "grid");
        const EchoSeries series = echo_series(exp, times, threads);
        const std::vector<double> gauss = echo_series_gaussian(exp, times);
        write_csv(out.file("echo.csv"),
                  {{"t", series.times}, {"mu", series.mu}, {"mu_gaussian_prediction", gauss}});
        const EchoReacquisition re = echo_at_reacquisition(exp);
        summary["t_reversal"] = t_rev;
        summary["reacquisition"] = {{"mu", re.mu},
                                    {"deficit", re.deficit},
                                    {"gaussian_r_modulus", re.gaussian_r_modulus}};
        summary["mu_infinity"] = exp.mu_infinity();
    }

    if (sweep_mode) {
        const std::vector<double> t_rev = grid_from(doc.at("reversal_grid"), "reversal_grid");
        std::vector<double> mu(t_rev.size());
        std::vector<double> deficit(t_rev.size());
        std::vector<double> gauss(t_rev.size());
        parallel_for_chunks(t_rev.size(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const EchoExperiment exp(sys, unrev, rev, t_rev[i]);
                const EchoReacquisition re = echo_at_reacquisition(exp);
                mu[i] = re.mu;
                deficit[i] = re.deficit;
                gauss[i] = echo_fidelity_gaussian(exp, 2.0 * t_rev[i]);
            }
        });
        write_csv(out.file("reacquisition.csv"), {{"t_reversal", t_rev},
                                                  {"mu", mu},
                                                  {"deficit", deficit},
                                                  {"mu_gaussian_prediction", gauss}});
        const double mu_inf = EchoExperiment(sys, unrev, rev, 0.0).mu_infinity();
        summary["mu_infinity"] = mu_inf;
        if (doc.contains("slope_window")) {
            std::vector<double> rho(t_rev.size());
            for (std::size_t i = 0; i < t_rev.size(); ++i) {
                rho[i] = (mu[i] - mu_inf) / (1.0 - mu_inf);
            }
            const json& w = doc.at("slope_window");
            const FitWindow window = w.is_string() && w.get<std::string>() == "auto"
                                         ? auto_slope_window(t_rev, rho)
                                         : window_from(w, "slope_window");
            json report = slope_to_json(loglog_slope(t_rev, rho, window));
            report["mu_infinity"] = mu_inf;
            save_json_file(report, out.file("slope_report.json"));
        }
    }

    save_json_file(summary, out.file("summary.json"));
}

void run_saturation(const json& doc, unsigned threads, Artifacts& out) {
    const std::uint64_t seed = seed_from(doc);
    const Environment env = environment_from(require_key(doc, "environment", ""), seed, 0, "environment");
    const std::vector<double> times = grid_from(require_key(doc, "grid", ""), "grid");
    const DecoherenceSeries series = decoherence_series(env, times, threads);
    const std::vector<double> abs_r = abs_values(series.values);
    write_csv(out.file("saturation.csv"), {{"t", series.times}, {"abs_r", abs_r}});

    const FitWindow window = doc.contains("window")
                                 ? window_from(doc.at("window"), "window")
                                 : FitWindow{times.front(), times.back()};
    const double rms = saturation_level(times, abs_r, window);
    const double analytic = std::sqrt(long_time_avg_sq(env));
    json summary;
    summary["n_spins"] = env.size();
    summary["rms"] = rms;
    summary["analytic_rms"] = analytic;
    summary["ratio"] = analytic > 0.0 ? json(rms / analytic) : json(nullptr);
    summary["window"] = {{"t_lo", window.t_lo}, {"t_hi", window.t_hi}};
    save_json_file(summary, out.file("summary.json"));
}

const char* const kExperiments[] = {"decoherence", "spectrum", "ensemble", "echo", "saturation"};

void validate_common(const json& doc, std::vector<std::string>& out) {
    if (doc.contains("seed")) {
        try {
            seed_from(doc);
        } catch (const std::exception& e) {
            out.push_back(e.what());
        }
    }
}

template <typename Fn>
void attempt(std::vector<std::string>& out, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        out.push_back(e.what());
    }
}

}  // namespace

ExperimentConfig::ExperimentConfig(nlohmann::json doc) : doc_(std::move(doc)) {
    if (!doc_.is_object()) {
        throw std::invalid_argument("config: expected a JSON object");
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    return ExperimentConfig(load_json_file(path));
}

void ExperimentConfig::set_path(const std::string& dotpath, const std::string& value_text) {
    if (dotpath.empty()) {
        throw std::invalid_argument("--set: empty path");
    }
    json value = json::parse(value_text, nullptr, false);
    if (value.is_discarded()) value = value_text;  // unquoted strings pass through

    json* node = &doc_;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = dotpath.find('.', pos);
        const std::string key = dotpath.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) {
            throw std::invalid_argument("--set: malformed path: " + dotpath);
        }
        const bool is_index = std::all_of(key.begin(), key.end(),
                                          [](unsigned char c) { return std::isdigit(c); });
        if (node->is_array()) {
            if (!is_index) {
                throw std::invalid_argument("--set: " + key + " indexes an array in " + dotpath);
            }
            const std::size_t idx = std::stoul(key);
            if (idx >= node->size()) {
                throw std::invalid_argument("--set: index " + key + " out of range in " + dotpath);
            }
            if (dot == std::string::npos) {
                (*node)[idx] = std::move(value);
                return;
            }
            node = &(*node)[idx];
        } else {
            if (!node->is_object() && !node->is_null()) {
                throw std::invalid_argument("--set: " + dotpath.substr(0, pos) +
                                            " is not an object");
            }
            if (dot == std::string::npos) {
                (*node)[key] = std::move(value);
                return;
            }
            node = &(*node)[key];
        }
        pos = dot + 1;
    }
}

void ExperimentConfig::set_seed(std::uint64_t seed) {
    doc_["seed"] = seed;
}

std::string ExperimentConfig::experiment() const {
    if (!doc_.contains("experiment") || !doc_.at("experiment").is_string()) {
        return "";
    }
    return doc_.at("experiment").get<std::string>();
}

std::vector<std::string> ExperimentConfig::validate() const {
    std::vector<std::string> out;
    const std::string kind = experiment();
    if (std::find(std::begin(kExperiments), std::end(kExperiments), kind) ==
        std::end(kExperiments)) {
        out.push_back("field experiment: must be one of decoherence, spectrum, ensemble, echo, "
                      "saturation");
        return out;
    }
    validate_common(doc_, out);
    const std::uint64_t seed = doc_.contains("seed") && out.empty() ? seed_from(doc_) : 0;

    if (kind == "decoherence") {
        check_keys(doc_, "",
                   {"experiment", "seed", "environment", "grid", "compare_expansion",
                    "expansion_cap", "write_walk"},
                   out);
        attempt(out, [&] {
            const Environment env =
                environment_from(require_key(doc_, "environment", ""), seed, 0, "environment");
            const std::size_t cap = expansion_cap_from(doc_);
            if ((get_bool_or(doc_, "compare_expansion", "", false) ||
                 get_bool_or(doc_, "write_walk", "", false)) &&
                env.size() > cap) {
                field_error("environment", "too many spins for the 2^N expansion (cap " +
                                               std::to_string(cap) + ")");
            }
        });
        if (doc_.contains("environment")) check_environment_keys(doc_["environment"], "environment", out);
        attempt(out, [&] { grid_from(require_key(doc_, "grid", ""), "grid"); });
    } else if (kind == "spectrum") {
        check_keys(doc_, "",
                   {"experiment", "seed", "environment", "merge_degenerate", "merge_tolerance",
                    "bins", "write_points", "expansion_cap"},
                   out);
        attempt(out, [&] {
            const Environment env =
                environment_from(require_key(doc_, "environment", ""), seed, 0, "environment");
            if (env.size() > expansion_cap_from(doc_)) {
                field_error("environment", "too many spins for spectrum enumeration (cap " +
                                               std::to_string(expansion_cap_from(doc_)) + ")");
            }
        });
        if (doc_.contains("environment")) check_environment_keys(doc_["environment"], "environment", out);
        attempt(out, [&] {
            if (get_number_or(doc_, "merge_tolerance", "", 0.0) < 0.0) {
                field_error("merge_tolerance", "must be >= 0");
            }
            if (get_integer_or(doc_, "bins", "", 0) < 0) field_error("bins", "must be >= 0");
        });
    } else if (kind == "ensemble") {
        check_keys(doc_, "", {"experiment", "seed", "ensemble", "grid", "fit"}, out);
        attempt(out, [&] {
            const json& ens = require_key(doc_, "ensemble", "");
            check_keys(ens, "ensemble", {"n_spins", "n_realizations", "p_up", "coupling"}, out);
            if (get_integer(ens, "n_spins", "ensemble") < 1) {
                field_error("ensemble.n_spins", "must be >= 1");
            }
            if (get_integer(ens, "n_realizations", "ensemble") < 1) {
                field_error("ensemble.n_realizations", "must be >= 1");
            }
            const double p = get_number_or(ens, "p_up", "ensemble", 0.5);
            if (!(p >= 0.0 && p <= 1.0)) field_error("ensemble.p_up", "must lie in [0, 1]");
            coupling_from(require_key(ens, "coupling", "ensemble"), "ensemble.coupling");
            check_coupling_keys(ens.at("coupling"), "ensemble.coupling", out);
        });
        attempt(out, [&] { grid_from(require_key(doc_, "grid", ""), "grid"); });
        if (doc_.contains("fit")) {
            attempt(out, [&] {
                const json& fit = doc_.at("fit");
                check_keys(fit, "fit", {"target", "window"}, out);
                const std::string target = get_string_or(fit, "target", "fit", "abs_mean");
                if (target != "abs_mean" && target != "mean_abs") {
                    field_error("fit.target", "must be abs_mean or mean_abs");
                }
                if (fit.contains("window")) window_from(fit.at("window"), "fit.window");
            });
        }
    } else if (kind == "echo") {
        check_keys(doc_, "",
                   {"experiment", "seed", "system", "env_unreversed", "env_reversed",
                    "t_reversal", "grid", "reversal_grid", "slope_window"},
                   out);
        attempt(out, [&] { system_from(doc_, ""); });
        attempt(out, [&] {
            environment_from(require_key(doc_, "env_unreversed", ""), seed, 0, "env_unreversed");
        });
        if (doc_.contains("env_unreversed")) {
            check_environment_keys(doc_["env_unreversed"], "env_unreversed", out);
        }
        if (doc_.contains("env_reversed")) {
            attempt(out, [&] { environment_from(doc_.at("env_reversed"), seed, 1, "env_reversed"); });
            check_environment_keys(doc_["env_reversed"], "env_reversed", out);
        }
        const bool series_mode = doc_.contains("grid");
        const bool sweep_mode = doc_.contains("reversal_grid");
        if (!series_mode && !sweep_mode) {
            out.push_back("field grid: echo needs a time grid, a reversal_grid sweep, or both");
        }
        if (series_mode) {
            attempt(out, [&] {
                grid_from(doc_.at("grid"), "grid");
                const double t_rev = get_number(doc_, "t_reversal", "");
                if (!(t_rev >= 0.0) || !std::isfinite(t_rev)) {
                    field_error("t_reversal", "must be finite and >= 0");
                }
            });
        }
        if (sweep_mode) {
            attempt(out, [&] { grid_from(doc_.at("reversal_grid"), "reversal_grid"); });
            if (doc_.contains("slope_window")) {
                attempt(out, [&] {
                    const json& w = doc_.at("slope_window");
                    if (w.is_string()) {
                        if (w.get<std::string>() != "auto") {
                            field_error("slope_window", "string form must be \"auto\"");
                        }
                    } else {
                        window_from(w, "slope_window");
                    }
                });
            }
        } else if (doc_.contains("slope_window")) {
            out.push_back("field slope_window: requires a reversal_grid sweep");
        }
    } else if (kind == "saturation") {
        check_keys(doc_, "", {"experiment", "seed", "environment", "grid", "window"}, out);
        attempt(out, [&] {
            environment_from(require_key(doc_, "environment", ""), seed, 0, "environment");
        });
        if (doc_.contains("environment")) check_environment_keys(doc_["environment"], "environment", out);
        attempt(out, [&] { grid_from(require_key(doc_, "grid", ""), "grid"); });
        if (doc_.contains("window")) {
            attempt(out, [&] { window_from(doc_.at("window"), "window"); });
        }
    }
    return out;
}

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                         unsigned threads) {
    if (threads == 0) {
        throw std::invalid_argument("threads: must be >= 1");
    }
    const std::vector<std::string> violations = config.validate();
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw std::invalid_argument(msg);
    }

    std::filesystem::create_directories(out_dir);

    json manifest;
    manifest["artifacts"] = json::object();
    manifest["config"] = config.doc();
    manifest["status"] = "started";
    manifest["timestamp"] = utc_timestamp_now();
    save_json_file(manifest, out_dir / "manifest.json");

    Artifacts out{out_dir, {}};
    const std::string kind = config.experiment();
    if (kind == "decoherence") {
        run_decoherence(config.doc(), threads, out);
    } else if (kind == "spectrum") {
        run_spectrum(config.doc(), threads, out);
    } else if (kind == "ensemble") {
        run_ensemble(config.doc(), threads, out);
    } else if (kind == "echo") {
        run_echo(config.doc(), threads, out);
    } else {
        run_saturation(config.doc(), threads, out);
    }

    for (const auto& name : out.names) {
        manifest["artifacts"][name] = file_digest(out_dir / name);
    }
    manifest["status"] = "complete";
    manifest["timestamp"] = utc_timestamp_now();
    save_json_file(manifest, out_dir / "manifest.json");

    return RunResult{std::move(out.names)};
}

}  // namespace spinbath
