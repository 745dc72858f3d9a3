#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <vector>

#include "spinbath/analysis.hpp"
#include "spinbath/echo.hpp"
#include "spinbath/ensembles.hpp"
#include "spinbath/io.hpp"
#include "spinbath/model.hpp"
#include "spinbath/spectrum.hpp"

namespace py = pybind11;
using namespace spinbath;

PYBIND11_MODULE(_spinbath, m) {
    m.doc() = "exact single-qubit spin-bath decoherence and Loschmidt echo toolkit";

    py::class_<SystemState>(m, "SystemState")
        .def(py::init<complexd, complexd>(), py::arg("a"), py::arg("b"))
        .def_property_readonly("a", &SystemState::a)
        .def_property_readonly("b", &SystemState::b)
        .def_property_readonly("p0", &SystemState::p0)
        .def_property_readonly("p1", &SystemState::p1);

    py::class_<BathSpin>(m, "BathSpin")
        .def(py::init<double, complexd, complexd>(), py::arg("g"), py::arg("alpha"),
             py::arg("beta"))
        .def_static("from_probability", &BathSpin::from_probability, py::arg("g"),
                    py::arg("p_up"))
        .def_property_readonly("g", &BathSpin::g)
        .def_property_readonly("alpha", &BathSpin::alpha)
        .def_property_readonly("beta", &BathSpin::beta)
        .def_property_readonly("p_up", &BathSpin::p_up)
        .def_property_readonly("p_down", &BathSpin::p_down);

    py::class_<Environment>(m, "Environment")
        .def(py::init<>())
        .def(py::init<std::vector<BathSpin>>(), py::arg("spins"))
        .def("__len__", &Environment::size)
        .def("__getitem__",
             [](const Environment& env, std::size_t i) {
                 if (i >= env.size()) throw py::index_error();
                 return env[i];
             })
        .def_property_readonly("spins", &Environment::spins);

    py::class_<DecoherenceSeries>(m, "DecoherenceSeries")
        .def_readonly("times", &DecoherenceSeries::times)
        .def_readonly("values", &DecoherenceSeries::values);

    py::class_<DensityMatrix2>(m, "DensityMatrix2")
        .def_property_readonly("rho00", &DensityMatrix2::rho00)
        .def_property_readonly("rho01", &DensityMatrix2::rho01)
        .def_property_readonly("rho10", &DensityMatrix2::rho10)
        .def_property_readonly("rho11", &DensityMatrix2::rho11)
        .def("eigen_min", &DensityMatrix2::eigen_min);

    m.def("concat", &concat, py::arg("first"), py::arg("second"));
    m.def("decoherence_factor", &decoherence_factor, py::arg("env"), py::arg("t"));
    m.def("decoherence_factor_expansion", &decoherence_factor_expansion, py::arg("env"),
          py::arg("t"), py::arg("max_spins") = kDefaultExpansionCap);
    m.def(
        "decoherence_series",
        [](const Environment& env, const std::vector<double>& times, unsigned threads) {
            return decoherence_series(env, times, threads);
        },
        py::arg("env"), py::arg("times"), py::arg("threads") = 1);
    m.def("reduced_density_matrix", &reduced_density_matrix, py::arg("sys"), py::arg("env"),
          py::arg("t"));
    m.def("long_time_avg_sq", &long_time_avg_sq, py::arg("env"));

    py::class_<EnergySpectrum>(m, "EnergySpectrum")
        .def_readonly("energies", &EnergySpectrum::energies)
        .def_readonly("weights", &EnergySpectrum::weights)
        .def_readonly("merged", &EnergySpectrum::merged)
        .def("__len__", &EnergySpectrum::size);

    py::class_<SpectrumMoments>(m, "SpectrumMoments")
        .def_readonly("mean", &SpectrumMoments::mean)
        .def_readonly("variance", &SpectrumMoments::variance);

    py::class_<GaussianSpectrumParams>(m, "GaussianSpectrumParams")
        .def(py::init([](double mean, double std) {
                 return GaussianSpectrumParams{mean, std};
             }),
             py::arg("mean"), py::arg("std"))
        .def_readwrite("mean", &GaussianSpectrumParams::mean)
        .def_readwrite("std", &GaussianSpectrumParams::std);

    py::class_<Histogram>(m, "Histogram")
        .def_readonly("centers", &Histogram::centers)
        .def_readonly("densities", &Histogram::densities)
        .def_readonly("bin_width", &Histogram::bin_width);

    m.def("enumerate_spectrum", &enumerate_spectrum, py::arg("env"),
          py::arg("merge_degenerate") = false, py::arg("max_spins") = kDefaultExpansionCap,
          py::arg("merge_tolerance") = 0.0);
    m.def("characteristic_function", &characteristic_function, py::arg("spec"), py::arg("t"));
    m.def("spectrum_moments", &spectrum_moments, py::arg("spec"));
    m.def("gaussian_params", &gaussian_params, py::arg("env"));
    m.def("gaussian_r_approx", &gaussian_r_approx, py::arg("params"), py::arg("t"));
    m.def("ldos_gaussian_envelope", &ldos_gaussian_envelope, py::arg("params"),
          py::arg("energy"));
    m.def("lindeberg_diagnostic", &lindeberg_diagnostic, py::arg("env"));
    m.def("ldos_histogram", &ldos_histogram, py::arg("spec"), py::arg("bins") = 0);

    py::class_<CouplingDistribution>(m, "CouplingDistribution")
        .def_static("uniform", &CouplingDistribution::uniform, py::arg("lo"), py::arg("hi"))
        .def_static("gaussian", &CouplingDistribution::gaussian, py::arg("mu"), py::arg("sigma"))
        .def_static("exponential", &CouplingDistribution::exponential, py::arg("rate"))
        .def_static("lorentzian", &CouplingDistribution::lorentzian, py::arg("center"),
                    py::arg("gamma"));

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def(py::init<CouplingDistribution, int, int, std::uint64_t, double>(), py::arg("dist"),
             py::arg("n_spins"), py::arg("n_realizations"), py::arg("seed"),
             py::arg("p_up") = 0.5)
        .def_readonly("n_spins", &EnsembleSpec::n_spins)
        .def_readonly("n_realizations", &EnsembleSpec::n_realizations)
        .def_readonly("seed", &EnsembleSpec::seed)
        .def_readonly("p_up", &EnsembleSpec::p_up);

    py::class_<EnsembleStats>(m, "EnsembleStats")
        .def_readonly("times", &EnsembleStats::times)
        .def_readonly("mean_r", &EnsembleStats::mean_r)
        .def_readonly("std_re", &EnsembleStats::std_re)
        .def_readonly("std_im", &EnsembleStats::std_im)
        .def_readonly("mean_abs", &EnsembleStats::mean_abs)
        .def_readonly("std_abs", &EnsembleStats::std_abs);

    m.def("sample_environment", &sample_environment, py::arg("spec"),
          py::arg("realization_index"));
    m.def(
        "ensemble_average_r",
        [](const EnsembleSpec& spec, const std::vector<double>& times, unsigned threads) {
            return ensemble_average_r(spec, times, threads);
        },
        py::arg("spec"), py::arg("times"), py::arg("threads") = 1);

    py::class_<EchoExperiment>(m, "EchoExperiment")
        .def(py::init<SystemState, Environment, Environment, double>(), py::arg("sys"),
             py::arg("env_unreversed"), py::arg("env_reversed"), py::arg("t_reversal"))
        .def_property_readonly("t_reversal", &EchoExperiment::t_reversal)
        .def("mu_infinity", &EchoExperiment::mu_infinity);

    py::class_<EchoSeries>(m, "EchoSeries")
        .def_readonly("times", &EchoSeries::times)
        .def_readonly("mu", &EchoSeries::mu);

    py::class_<EchoReacquisition>(m, "EchoReacquisition")
        .def_readonly("mu", &EchoReacquisition::mu)
        .def_readonly("deficit", &EchoReacquisition::deficit)
        .def_readonly("gaussian_r_modulus", &EchoReacquisition::gaussian_r_modulus);

    m.def("echo_fidelity", &echo_fidelity, py::arg("exp"), py::arg("t"));
    m.def("echo_fidelity_gaussian", &echo_fidelity_gaussian, py::arg("exp"), py::arg("t"));
    m.def("echo_at_reacquisition", &echo_at_reacquisition, py::arg("exp"));
    m.def(
        "echo_series",
        [](const EchoExperiment& exp, const std::vector<double>& times, unsigned threads) {
            return echo_series(exp, times, threads);
        },
        py::arg("exp"), py::arg("times"), py::arg("threads") = 1);
    m.def(
        "echo_series_gaussian",
        [](const EchoExperiment& exp, const std::vector<double>& times) {
            return echo_series_gaussian(exp, times);
        },
        py::arg("exp"), py::arg("times"));

    py::enum_<DecayModel>(m, "DecayModel")
        .value("GAUSSIAN", DecayModel::Gaussian)
        .value("EXPONENTIAL", DecayModel::Exponential);

    py::enum_<DecayClass>(m, "DecayClass")
        .value("GAUSSIAN", DecayClass::Gaussian)
        .value("EXPONENTIAL", DecayClass::Exponential)
        .value("AMBIGUOUS", DecayClass::Ambiguous);

    py::class_<FitWindow>(m, "FitWindow")
        .def(py::init([](double t_lo, double t_hi) {
                 return FitWindow{t_lo, t_hi};
             }),
             py::arg("t_lo"), py::arg("t_hi"))
        .def_readwrite("t_lo", &FitWindow::t_lo)
        .def_readwrite("t_hi", &FitWindow::t_hi);

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("model", &DecayFit::model)
        .def_readonly("timescale", &DecayFit::timescale)
        .def_readonly("amplitude", &DecayFit::amplitude)
        .def_readonly("residual_rms", &DecayFit::residual_rms)
        .def_readonly("window", &DecayFit::window);

    py::class_<DecayClassification>(m, "DecayClassification")
        .def_readonly("verdict", &DecayClassification::verdict)
        .def_readonly("gaussian", &DecayClassification::gaussian)
        .def_readonly("exponential", &DecayClassification::exponential);

    py::class_<SlopeFit>(m, "SlopeFit")
        .def_readonly("slope", &SlopeFit::slope)
        .def_readonly("intercept", &SlopeFit::intercept)
        .def_readonly("std_error", &SlopeFit::std_error)
        .def_readonly("window", &SlopeFit::window);

    m.def(
        "fit_decay",
        [](const std::vector<double>& times, const std::vector<double>& values, DecayModel model,
           FitWindow window) { return fit_decay(times, values, model, window); },
        py::arg("times"), py::arg("values"), py::arg("model"), py::arg("window"));
    m.def(
        "classify_decay",
        [](const std::vector<double>& times, const std::vector<double>& values,
           FitWindow window) { return classify_decay(times, values, window); },
        py::arg("times"), py::arg("values"), py::arg("window"));
    m.def(
        "loglog_slope",
        [](const std::vector<double>& times, const std::vector<double>& deficit,
           FitWindow window) { return loglog_slope(times, deficit, window); },
        py::arg("times"), py::arg("deficit"), py::arg("window"));
    m.def(
        "loglog_slope_raw",
        [](const std::vector<double>& times, const std::vector<double>& deficit,
           FitWindow window) { return loglog_slope_raw(times, deficit, window); },
        py::arg("times"), py::arg("deficit"), py::arg("window"));
    m.def(
        "saturation_level",
        [](const std::vector<double>& times, const std::vector<double>& values,
           FitWindow window) { return saturation_level(times, values, window); },
        py::arg("times"), py::arg("values"), py::arg("window"));
    m.def(
        "series_ratio",
        [](const std::vector<double>& numer, const std::vector<double>& denom) {
            return series_ratio(numer, denom);
        },
        py::arg("numer"), py::arg("denom"));
    m.def(
        "default_fit_window",
        [](const std::vector<double>& times, const std::vector<double>& values) {
            return default_fit_window(times, values);
        },
        py::arg("times"), py::arg("values"));

    m.def(
        "load_environment",
        [](const std::string& path) { return load_environment(path); }, py::arg("path"));
    m.def(
        "save_environment",
        [](const Environment& env, const std::string& path) { save_environment(env, path); },
        py::arg("env"), py::arg("path"));
}
