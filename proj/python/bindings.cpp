#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcd/csv.hpp"
#include "qcd/detectors.hpp"
#include "qcd/eval.hpp"
#include "qcd/models.hpp"
#include "qcd/simulate.hpp"
#include "qcd/spectral.hpp"
#include "qcd/summary.hpp"

namespace py = pybind11;
using namespace qcd;

namespace {

std::vector<double> to_vec(const py::sequence& seq) {
    std::vector<double> out;
    out.reserve(py::len(seq));
    for (const auto& item : seq) out.push_back(item.cast<double>());
    return out;
}

} // namespace

PYBIND11_MODULE(_qcd, m) {
    m.doc() = "Streaming quickest change detection: CUSUM-family detectors, "
              "spike-train simulation, Monte Carlo calibration.";

    py::enum_<Family>(m, "Family")
        .value("Bernoulli", Family::Bernoulli)
        .value("Poisson", Family::Poisson)
        .value("GaussianMean", Family::GaussianMean)
        .value("Ar1Gaussian", Family::Ar1Gaussian);

    py::class_<ParametricModel>(m, "ParametricModel")
        .def_static("bernoulli", &ParametricModel::bernoulli, py::arg("p"))
        .def_static("poisson", &ParametricModel::poisson, py::arg("rate"))
        .def_static("gaussian_mean", &ParametricModel::gaussian_mean, py::arg("mean"),
                    py::arg("variance"))
        .def_static("ar1_gaussian", &ParametricModel::ar1_gaussian, py::arg("coefficient"),
                    py::arg("innovation_variance"))
        .def_property_readonly("family", &ParametricModel::family)
        .def_property_readonly("primary_param", &ParametricModel::primary_param)
        .def_property_readonly("variance_param", &ParametricModel::variance_param)
        .def(
            "log_density",
            [](const ParametricModel& self, double x, const std::vector<double>& history) {
                return self.log_density(x, history);
            },
            py::arg("x"), py::arg("history") = std::vector<double>{});

    m.def(
        "log_likelihood_ratio",
        [](const ParametricModel& f0, const ParametricModel& f1, double x,
           const std::vector<double>& history) {
            return log_likelihood_ratio(f0, f1, x, history);
        },
        py::arg("f0"), py::arg("f1"), py::arg("x"), py::arg("history") = std::vector<double>{});
    m.def("kl_divergence", &kl_divergence, py::arg("f"), py::arg("g"));

    py::class_<ParameterSet>(m, "ParameterSet")
        .def(py::init<double, double>(), py::arg("lower"), py::arg("upper"))
        .def_readwrite("lower", &ParameterSet::lower)
        .def_readwrite("upper", &ParameterSet::upper);

    m.def(
        "mle",
        [](Family family, const py::sequence& samples, const ParameterSet& constraint) {
            return mle(family, to_vec(samples), constraint);
        },
        py::arg("family"), py::arg("samples"), py::arg("constraint"));
    m.def(
        "sample",
        [](const ParametricModel& model, std::size_t n, std::uint64_t seed) {
            return sample(model, n, seed);
        },
        py::arg("model"), py::arg("n"), py::arg("seed"));
    m.def("derive_seed", &derive_seed, py::arg("root"), py::arg("index"));

    py::class_<FrequencyBand>(m, "FrequencyBand")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &FrequencyBand::lo)
        .def_readwrite("hi", &FrequencyBand::hi);

    py::class_<SpectrumEstimate>(m, "SpectrumEstimate")
        .def_readonly("frequencies", &SpectrumEstimate::frequencies)
        .def_readonly("power", &SpectrumEstimate::power)
        .def_readonly("window_length", &SpectrumEstimate::window_length);

    m.def(
        "periodogram", [](const py::sequence& window) { return periodogram(to_vec(window)); },
        py::arg("window"));
    m.def("spectral_mass", &spectral_mass, py::arg("estimate"), py::arg("band"));
    m.def("total_spectral_mass", &total_spectral_mass, py::arg("estimate"));

    py::enum_<StatKind>(m, "StatKind")
        .value("Mean", StatKind::Mean)
        .value("Variance", StatKind::Variance)
        .value("Entropy", StatKind::Entropy)
        .value("SpectralMass", StatKind::SpectralMass);

    py::class_<SummaryStatistic>(m, "SummaryStatistic")
        .def_readwrite("kind", &SummaryStatistic::kind)
        .def_readwrite("window_length", &SummaryStatistic::window_length)
        .def_readwrite("mu0", &SummaryStatistic::mu0)
        .def_readwrite("lambda_", &SummaryStatistic::lambda)
        .def_readwrite("band", &SummaryStatistic::band)
        .def_readwrite("center", &SummaryStatistic::center);

    m.def("make_mean_stat", &make_mean_stat, py::arg("window_length"), py::arg("mu0"),
          py::arg("lambda_"));
    m.def("make_variance_stat", &make_variance_stat, py::arg("window_length"), py::arg("mu0"),
          py::arg("lambda_"), py::arg("center") = 0.0);
    m.def("make_entropy_stat", &make_entropy_stat, py::arg("window_length"), py::arg("mu0"),
          py::arg("lambda_"), py::arg("pre_density"));
    m.def("make_spectral_stat", &make_spectral_stat, py::arg("window_length"), py::arg("mu0"),
          py::arg("lambda_"), py::arg("band") = std::nullopt);
    m.def(
        "evaluate",
        [](const SummaryStatistic& stat, const py::sequence& window) {
            return evaluate(stat, to_vec(window));
        },
        py::arg("stat"), py::arg("window"));
    m.def(
        "learn_baseline",
        [](const SummaryStatistic& stat, const py::sequence& training, std::size_t stride) {
            return learn_baseline(stat, to_vec(training), stride);
        },
        py::arg("stat"), py::arg("training"), py::arg("stride") = 1);
    m.def(
        "with_learned_baseline",
        [](const SummaryStatistic& stat, const py::sequence& training, std::size_t stride) {
            return with_learned_baseline(stat, to_vec(training), stride);
        },
        py::arg("stat"), py::arg("training"), py::arg("stride") = 1);

    py::class_<DetectorState>(m, "DetectorState")
        .def_static("fresh", &DetectorState::fresh, py::arg("threshold"))
        .def_readonly("statistic", &DetectorState::statistic)
        .def_readonly("n", &DetectorState::n)
        .def_readonly("threshold", &DetectorState::threshold)
        .def_readonly("stopped", &DetectorState::stopped)
        .def_readonly("stopping_time", &DetectorState::stopping_time);

    py::class_<StoppingReport>(m, "StoppingReport")
        .def_readonly("stopping_time", &StoppingReport::stopping_time)
        .def_readonly("statistic_path", &StoppingReport::statistic_path)
        .def_readonly("threshold", &StoppingReport::threshold)
        .def_readonly("detected", &StoppingReport::detected);

    m.def("cusum_step", &cusum_step, py::arg("state"), py::arg("llr"));
    m.def(
        "cusum_run",
        [](const ParametricModel& f0, const ParametricModel& f1, const py::sequence& obs,
           double threshold) { return cusum_run(f0, f1, to_vec(obs), threshold); },
        py::arg("f0"), py::arg("f1"), py::arg("observations"), py::arg("threshold"));
    m.def(
        "cusum_maxform",
        [](const ParametricModel& f0, const ParametricModel& f1, const py::sequence& obs) {
            return cusum_maxform(f0, f1, to_vec(obs));
        },
        py::arg("f0"), py::arg("f1"), py::arg("observations"));

    py::class_<GlrConfig>(m, "GlrConfig")
        .def(py::init([](Family family, const ParameterSet& theta0, const ParameterSet& theta1,
                         std::size_t window, double gaussian_variance) {
                 GlrConfig c{family, theta0, theta1, window, gaussian_variance};
                 validate_glr_config(c);
                 return c;
             }),
             py::arg("family"), py::arg("theta0"), py::arg("theta1"), py::arg("window") = 200,
             py::arg("gaussian_variance") = 1.0)
        .def_readwrite("family", &GlrConfig::family)
        .def_readwrite("theta0", &GlrConfig::theta0)
        .def_readwrite("theta1", &GlrConfig::theta1)
        .def_readwrite("window", &GlrConfig::window)
        .def_readwrite("gaussian_variance", &GlrConfig::gaussian_variance);

    m.def(
        "gcusum_statistic",
        [](const GlrConfig& config, const py::sequence& obs) {
            return gcusum_statistic(config, to_vec(obs));
        },
        py::arg("config"), py::arg("observations"));
    m.def(
        "gcusum_run",
        [](const GlrConfig& config, const py::sequence& obs, double threshold) {
            return gcusum_run(config, to_vec(obs), threshold);
        },
        py::arg("config"), py::arg("observations"), py::arg("threshold"));

    m.def(
        "noniid_cusum_step_fullhistory",
        [](DetectorState state, const ParametricModel& f0, const ParametricModel& f1, double x,
           const py::sequence& history) {
            return noniid_cusum_step_fullhistory(state, f0, f1, x, to_vec(history));
        },
        py::arg("state"), py::arg("f0"), py::arg("f1"), py::arg("x"), py::arg("history"));
    m.def(
        "noniid_cusum_run_fullhistory",
        [](const ParametricModel& f0, const ParametricModel& f1, const py::sequence& obs,
           double threshold) {
            return noniid_cusum_run_fullhistory(f0, f1, to_vec(obs), threshold);
        },
        py::arg("f0"), py::arg("f1"), py::arg("observations"), py::arg("threshold"));
    m.def(
        "noniid_cusum_run_reset",
        [](const ParametricModel& f0, const ParametricModel& f1, const py::sequence& obs,
           double threshold, std::size_t window) {
            return noniid_cusum_run_reset(f0, f1, to_vec(obs), threshold, window);
        },
        py::arg("f0"), py::arg("f1"), py::arg("observations"), py::arg("threshold"),
        py::arg("window"));

    m.def("deviation_cusum_step", &deviation_cusum_step, py::arg("state"), py::arg("h_value"),
          py::arg("mu0"), py::arg("lambda_"));
    m.def(
        "deviation_cusum_run",
        [](const SummaryStatistic& stat, const py::sequence& obs, double threshold,
           std::size_t stride) {
            return deviation_cusum_run(stat, to_vec(obs), threshold, stride);
        },
        py::arg("stat"), py::arg("observations"), py::arg("threshold"), py::arg("stride") = 1);

    py::class_<ChangeSpec>(m, "ChangeSpec")
        .def(py::init([](const ParametricModel& pre, const ParametricModel& post,
                         std::size_t change_point, std::size_t length) {
                 ChangeSpec s{pre, post, change_point, length};
                 validate_change_spec(s);
                 return s;
             }),
             py::arg("pre"), py::arg("post"), py::arg("change_point"), py::arg("length"))
        .def_readonly("change_point", &ChangeSpec::change_point)
        .def_readonly("length", &ChangeSpec::length);
    m.attr("NO_CHANGE") = kNoChange;

    m.def("gen_iid_change", &gen_iid_change, py::arg("spec"), py::arg("seed"));

    py::enum_<ResponseKind>(m, "ResponseKind")
        .value("Immediate", ResponseKind::Immediate)
        .value("Delayed", ResponseKind::Delayed)
        .value("Periodic", ResponseKind::Periodic);

    py::class_<Response>(m, "Response")
        .def(py::init([](ResponseKind kind, std::size_t offset_bins, std::size_t period_bins) {
                 return Response{kind, offset_bins, period_bins};
             }),
             py::arg("kind") = ResponseKind::Immediate, py::arg("offset_bins") = 0,
             py::arg("period_bins") = 4)
        .def_readwrite("kind", &Response::kind)
        .def_readwrite("offset_bins", &Response::offset_bins)
        .def_readwrite("period_bins", &Response::period_bins);

    py::class_<SpikeTrialSet>(m, "SpikeTrialSet")
        .def_readonly("trials", &SpikeTrialSet::trials)
        .def_readonly("bins", &SpikeTrialSet::bins)
        .def_readonly("bin_width", &SpikeTrialSet::bin_width)
        .def_readonly("change_trial", &SpikeTrialSet::change_trial)
        .def_readonly("cue_bin", &SpikeTrialSet::cue_bin)
        .def("row", [](const SpikeTrialSet& self, std::size_t trial) {
            const auto r = self.row(trial);
            return std::vector<int>(r.begin(), r.end());
        });

    m.def("gen_trial_experiment", &gen_trial_experiment, py::arg("trials"), py::arg("bins"),
          py::arg("baseline_rate"), py::arg("post_rate"), py::arg("change_trial"),
          py::arg("cue_bin"), py::arg("response"), py::arg("seed"), py::arg("bin_width") = 0.01);
    m.def("concat_trials", &concat_trials, py::arg("set"));
    m.def("periodic_off_rate", &periodic_off_rate, py::arg("bins"), py::arg("cue_bin"),
          py::arg("period"), py::arg("baseline_rate"), py::arg("post_rate"));

    py::class_<CusumConfig>(m, "CusumConfig")
        .def(py::init<ParametricModel, ParametricModel>(), py::arg("f0"), py::arg("f1"));
    py::class_<NoniidConfig>(m, "NoniidConfig")
        .def(py::init([](ParametricModel f0, ParametricModel f1, bool reset_conditioning,
                         std::size_t window) {
                 return NoniidConfig{std::move(f0), std::move(f1), reset_conditioning, window};
             }),
             py::arg("f0"), py::arg("f1"), py::arg("reset_conditioning") = false,
             py::arg("window") = 200);
    py::class_<DeviationConfig>(m, "DeviationConfig")
        .def(py::init([](SummaryStatistic stat, std::size_t stride) {
                 return DeviationConfig{std::move(stat), stride};
             }),
             py::arg("stat"), py::arg("stride") = 1);

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("threshold", &CalibrationResult::threshold)
        .def_readonly("estimated_arl", &CalibrationResult::estimated_arl)
        .def_readonly("arl_std_error", &CalibrationResult::arl_std_error)
        .def_readonly("runs", &CalibrationResult::runs)
        .def_readonly("censored_runs", &CalibrationResult::censored_runs)
        .def_readonly("lower_bound", &CalibrationResult::lower_bound)
        .def_readonly("target_reached", &CalibrationResult::target_reached);

    py::class_<DelayResult>(m, "DelayResult")
        .def_readonly("threshold", &DelayResult::threshold)
        .def_readonly("mean_delay", &DelayResult::mean_delay)
        .def_readonly("delay_std_error", &DelayResult::delay_std_error)
        .def_readonly("missed", &DelayResult::missed)
        .def_readonly("censored", &DelayResult::censored)
        .def_readonly("runs", &DelayResult::runs)
        .def_readonly("flagged", &DelayResult::flagged);

    py::class_<TradeoffRow>(m, "TradeoffRow")
        .def_readonly("threshold", &TradeoffRow::threshold)
        .def_readonly("estimated_arl", &TradeoffRow::estimated_arl)
        .def_readonly("arl_lower_bound", &TradeoffRow::arl_lower_bound)
        .def_readonly("mean_delay", &TradeoffRow::mean_delay)
        .def_readonly("missed", &TradeoffRow::missed)
        .def_readonly("censored", &TradeoffRow::censored);

    m.def("estimate_arl", &estimate_arl, py::arg("config"), py::arg("pre_model"),
          py::arg("threshold"), py::arg("runs"), py::arg("max_length"), py::arg("seed"));
    m.def("estimate_delay", &estimate_delay, py::arg("config"), py::arg("spec"),
          py::arg("threshold"), py::arg("runs"), py::arg("seed"));

    py::class_<CalibrationOptions>(m, "CalibrationOptions")
        .def(py::init<>())
        .def_readwrite("bracket_lo", &CalibrationOptions::bracket_lo)
        .def_readwrite("bracket_hi", &CalibrationOptions::bracket_hi)
        .def_readwrite("rel_tol", &CalibrationOptions::rel_tol)
        .def_readwrite("max_iters", &CalibrationOptions::max_iters)
        .def_readwrite("max_length", &CalibrationOptions::max_length);

    m.def("calibrate_threshold", &calibrate_threshold, py::arg("config"), py::arg("pre_model"),
          py::arg("target_arl"), py::arg("runs"), py::arg("seed"),
          py::arg("options") = CalibrationOptions{});
    m.def(
        "tradeoff_table",
        [](const DetectorConfig& config, const ChangeSpec& spec,
           const std::vector<double>& thresholds, std::size_t runs, std::uint64_t seed,
           std::size_t max_length) {
            return tradeoff_table(config, spec, thresholds, runs, seed, max_length);
        },
        py::arg("config"), py::arg("spec"), py::arg("thresholds"), py::arg("runs"),
        py::arg("seed"), py::arg("max_length") = 10000);

    m.def("run_detector",
          [](const DetectorConfig& config, const py::sequence& obs, double threshold) {
              return run_detector(config, to_vec(obs), threshold);
          });
    m.def("stopping_observation_index", &stopping_observation_index, py::arg("config"),
          py::arg("stopping_time"));

    m.def("write_spike_csv", &csv::write_spike_csv, py::arg("set"), py::arg("path"));
    m.def("read_spike_csv", &csv::read_spike_csv, py::arg("path"));

    m.attr("__version__") = "0.1.0";
}
