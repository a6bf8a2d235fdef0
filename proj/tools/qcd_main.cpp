// qcd: streaming change detection experiments on trial-structured data.
//
// Subcommands: simulate | detect | calibrate | evaluate. Every option can
// come from a JSON config file (--config); command line flags win. Exit
// codes: 0 success (detect: change found), 1 detect ran but found nothing,
// 2 usage/config error, 3 data error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcd/csv.hpp"
#include "qcd/detectors.hpp"
#include "qcd/eval.hpp"
#include "qcd/models.hpp"
#include "qcd/simulate.hpp"
#include "qcd/summary.hpp"

namespace {

using nlohmann::json;

enum ExitCode : int { kDetected = 0, kSuccess = 0, kNoDetection = 1, kConfigError = 2, kDataError = 3 };

int log_verbosity() {
    const char* env = std::getenv("QCD_LOG");
    if (env == nullptr) return 1;
    const std::string v(env);
    if (v == "error") return 0;
    if (v == "info") return 1;
    if (v == "debug") return 2;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_verbosity() >= 1) std::cerr << "[qcd] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_verbosity() >= 2) std::cerr << "[qcd:debug] " << msg << "\n";
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every experiment knob, all optional; JSON fills first, flags override.
struct Config {
    std::optional<std::string> detector;
    std::optional<std::string> family;
    std::optional<double> pre_param;
    std::optional<double> post_param;
    std::optional<double> gaussian_variance;
    std::optional<double> threshold;
    std::optional<double> target_arl;
    std::optional<std::size_t> baseline_trials;
    std::optional<std::size_t> stride;
    std::optional<std::string> stat;
    std::optional<double> lambda;
    std::optional<std::size_t> window_length;
    std::optional<double> mu0;
    std::optional<double> band_lo;
    std::optional<double> band_hi;
    std::optional<double> theta0_lo;
    std::optional<double> theta0_hi;
    std::optional<double> theta1_lo;
    std::optional<double> theta1_hi;
    std::optional<std::size_t> glr_window;
    std::optional<std::size_t> noniid_window;
    std::optional<bool> noniid_reset;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> max_length;
    std::optional<std::vector<double>> thresholds;
    std::optional<std::size_t> change_point;
    std::optional<std::size_t> length;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> input;
    std::optional<std::string> out;
    // simulate
    std::optional<std::size_t> trials;
    std::optional<std::size_t> bins;
    std::optional<double> baseline_rate;
    std::optional<double> post_rate;
    std::optional<std::size_t> change_trial;
    std::optional<std::size_t> cue_bin;
    std::optional<std::string> response;
    std::optional<std::size_t> offset_bins;
    std::optional<std::size_t> period_bins;
    std::optional<double> bin_width;
};

template <typename T>
void merge_field(std::optional<T>& into, const std::optional<T>& from) {
    if (from.has_value()) into = from;
}

void merge(Config& base, const Config& overrides) {
    merge_field(base.detector, overrides.detector);
    merge_field(base.family, overrides.family);
    merge_field(base.pre_param, overrides.pre_param);
    merge_field(base.post_param, overrides.post_param);
    merge_field(base.gaussian_variance, overrides.gaussian_variance);
    merge_field(base.threshold, overrides.threshold);
    merge_field(base.target_arl, overrides.target_arl);
    merge_field(base.baseline_trials, overrides.baseline_trials);
    merge_field(base.stride, overrides.stride);
    merge_field(base.stat, overrides.stat);
    merge_field(base.lambda, overrides.lambda);
    merge_field(base.window_length, overrides.window_length);
    merge_field(base.mu0, overrides.mu0);
    merge_field(base.band_lo, overrides.band_lo);
    merge_field(base.band_hi, overrides.band_hi);
    merge_field(base.theta0_lo, overrides.theta0_lo);
    merge_field(base.theta0_hi, overrides.theta0_hi);
    merge_field(base.theta1_lo, overrides.theta1_lo);
    merge_field(base.theta1_hi, overrides.theta1_hi);
    merge_field(base.glr_window, overrides.glr_window);
    merge_field(base.noniid_window, overrides.noniid_window);
    merge_field(base.noniid_reset, overrides.noniid_reset);
    merge_field(base.runs, overrides.runs);
    merge_field(base.max_length, overrides.max_length);
    merge_field(base.thresholds, overrides.thresholds);
    merge_field(base.change_point, overrides.change_point);
    merge_field(base.length, overrides.length);
    merge_field(base.seed, overrides.seed);
    merge_field(base.input, overrides.input);
    merge_field(base.out, overrides.out);
    merge_field(base.trials, overrides.trials);
    merge_field(base.bins, overrides.bins);
    merge_field(base.baseline_rate, overrides.baseline_rate);
    merge_field(base.post_rate, overrides.post_rate);
    merge_field(base.change_trial, overrides.change_trial);
    merge_field(base.cue_bin, overrides.cue_bin);
    merge_field(base.response, overrides.response);
    merge_field(base.offset_bins, overrides.offset_bins);
    merge_field(base.period_bins, overrides.period_bins);
    merge_field(base.bin_width, overrides.bin_width);
}

Config load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");

    Config cfg;
    const auto get = [&doc](const char* key, auto& slot) {
        if (doc.contains(key)) {
            using T = typename std::decay_t<decltype(slot)>::value_type;
            try {
                slot = doc.at(key).template get<T>();
            } catch (const json::exception&) {
                throw ConfigError(std::string("config key '") + key + "' has the wrong type");
            }
        }
    };
    get("detector", cfg.detector);
    get("family", cfg.family);
    get("pre_param", cfg.pre_param);
    get("post_param", cfg.post_param);
    get("gaussian_variance", cfg.gaussian_variance);
    get("threshold", cfg.threshold);
    get("target_arl", cfg.target_arl);
    get("baseline_trials", cfg.baseline_trials);
    get("stride", cfg.stride);
    get("stat", cfg.stat);
    get("lambda", cfg.lambda);
    get("window_length", cfg.window_length);
    get("mu0", cfg.mu0);
    get("band_lo", cfg.band_lo);
    get("band_hi", cfg.band_hi);
    get("theta0_lo", cfg.theta0_lo);
    get("theta0_hi", cfg.theta0_hi);
    get("theta1_lo", cfg.theta1_lo);
    get("theta1_hi", cfg.theta1_hi);
    get("glr_window", cfg.glr_window);
    get("noniid_window", cfg.noniid_window);
    get("noniid_reset", cfg.noniid_reset);
    get("runs", cfg.runs);
    get("max_length", cfg.max_length);
    get("thresholds", cfg.thresholds);
    get("change_point", cfg.change_point);
    get("length", cfg.length);
    get("seed", cfg.seed);
    get("input", cfg.input);
    get("out", cfg.out);
    get("trials", cfg.trials);
    get("bins", cfg.bins);
    get("baseline_rate", cfg.baseline_rate);
    get("post_rate", cfg.post_rate);
    get("change_trial", cfg.change_trial);
    get("cue_bin", cfg.cue_bin);
    get("response", cfg.response);
    get("offset_bins", cfg.offset_bins);
    get("period_bins", cfg.period_bins);
    get("bin_width", cfg.bin_width);

    static const std::vector<std::string> known = {
        "detector", "family", "pre_param", "post_param", "gaussian_variance", "threshold",
        "target_arl", "baseline_trials", "stride", "stat", "lambda", "window_length", "mu0",
        "band_lo", "band_hi", "theta0_lo", "theta0_hi", "theta1_lo", "theta1_hi", "glr_window",
        "noniid_window", "noniid_reset", "runs", "max_length", "thresholds", "change_point",
        "length", "seed", "input", "out", "trials", "bins", "baseline_rate", "post_rate",
        "change_trial", "cue_bin", "response", "offset_bins", "period_bins", "bin_width"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

qcd::Family parse_family(const std::string& name) {
    if (name == "bernoulli") return qcd::Family::Bernoulli;
    if (name == "poisson") return qcd::Family::Poisson;
    if (name == "gaussian") return qcd::Family::GaussianMean;
    if (name == "ar1") return qcd::Family::Ar1Gaussian;
    throw ConfigError("unknown family '" + name + "'");
}

qcd::StatKind parse_stat(const std::string& name) {
    if (name == "mean") return qcd::StatKind::Mean;
    if (name == "variance") return qcd::StatKind::Variance;
    if (name == "entropy") return qcd::StatKind::Entropy;
    if (name == "spectral") return qcd::StatKind::SpectralMass;
    throw ConfigError("unknown statistic '" + name + "'");
}

qcd::ResponseKind parse_response(const std::string& name) {
    if (name == "immediate") return qcd::ResponseKind::Immediate;
    if (name == "delayed") return qcd::ResponseKind::Delayed;
    if (name == "periodic") return qcd::ResponseKind::Periodic;
    throw ConfigError("unknown response '" + name + "'");
}

qcd::ParametricModel make_model(qcd::Family family, double param, double variance) {
    switch (family) {
        case qcd::Family::Bernoulli: return qcd::ParametricModel::bernoulli(param);
        case qcd::Family::Poisson: return qcd::ParametricModel::poisson(param);
        case qcd::Family::GaussianMean: return qcd::ParametricModel::gaussian_mean(param, variance);
        case qcd::Family::Ar1Gaussian: return qcd::ParametricModel::ar1_gaussian(param, variance);
    }
    throw ConfigError("unreachable family");
}

template <typename T>
T require(const std::optional<T>& field, const char* what) {
    if (!field.has_value()) throw ConfigError(std::string("missing required setting: ") + what);
    return *field;
}

// --- detector assembly ---------------------------------------------------

struct BaselineSummary {
    double mu0 = 0.0;
    double std_error = 0.0; // of mu0
    std::size_t windows = 0;
};

BaselineSummary baseline_moments(const qcd::SummaryStatistic& stat,
                                 std::span<const double> training, std::size_t stride) {
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start + stat.window_length <= training.size(); start += stride) {
        const double h = qcd::evaluate(stat, training.subspan(start, stat.window_length));
        sum += h;
        sumsq += h * h;
        ++count;
    }
    BaselineSummary out;
    out.windows = count;
    out.mu0 = sum / static_cast<double>(count);
    if (count > 1) {
        const double n = static_cast<double>(count);
        const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
        out.std_error = std::sqrt(var / n);
    }
    return out;
}

// Deviation statistic from config plus a training segment (detect pipeline).
// window_length defaults to one trial for the spectral statistic and to 1
// otherwise; stride defaults to the window length for spectral (per-trial
// evaluation) and to 1 otherwise. Without an explicit lambda the heuristic
// lambda = 3 * SE(mu0) is used.
qcd::DeviationConfig build_deviation(const Config& cfg, std::span<const double> training,
                                     std::size_t bins) {
    const qcd::StatKind kind = parse_stat(cfg.stat.value_or("mean"));
    const bool spectral = kind == qcd::StatKind::SpectralMass;
    const std::size_t window_length =
        cfg.window_length.value_or(spectral ? bins : std::size_t{1});
    const std::size_t stride = cfg.stride.value_or(spectral ? window_length : std::size_t{1});

    qcd::SummaryStatistic stat;
    stat.kind = kind;
    stat.window_length = window_length;
    stat.lambda = 1.0; // placeholder until learned below
    if (kind == qcd::StatKind::Entropy) {
        const double rate = std::accumulate(training.begin(), training.end(), 0.0) /
                            static_cast<double>(training.size());
        stat.aux = cfg.pre_param.has_value()
                       ? make_model(parse_family(cfg.family.value_or("bernoulli")),
                                    *cfg.pre_param, cfg.gaussian_variance.value_or(1.0))
                       : qcd::ParametricModel::bernoulli(rate);
    }
    if (spectral && (cfg.band_lo.has_value() || cfg.band_hi.has_value())) {
        stat.band = qcd::FrequencyBand{cfg.band_lo.value_or(0.0),
                                       cfg.band_hi.value_or(std::numbers::pi)};
        qcd::validate_band(*stat.band);
    }

    stat = qcd::with_learned_baseline(stat, training, stride);
    const BaselineSummary moments = baseline_moments(stat, training, stride);
    if (cfg.lambda.has_value()) {
        stat.lambda = *cfg.lambda;
    } else {
        stat.lambda = 3.0 * moments.std_error;
        if (!(stat.lambda > 0.0)) {
            throw ConfigError("cannot derive lambda from constant training data; pass --lambda");
        }
        log_info("lambda not given; using 3*SE(mu0) = " + qcd::csv::format_double(stat.lambda));
    }
    qcd::validate_stat(stat);
    log_debug("baseline mu0 = " + qcd::csv::format_double(stat.mu0) + " from " +
              std::to_string(moments.windows) + " windows");
    return qcd::DeviationConfig{stat, stride};
}

qcd::DetectorConfig build_detector(const Config& cfg, std::span<const double> training,
                                   std::size_t bins) {
    const std::string name = require(cfg.detector, "detector");
    const qcd::Family family = parse_family(cfg.family.value_or("bernoulli"));
    const double variance = cfg.gaussian_variance.value_or(1.0);
    if (name == "cusum") {
        return qcd::CusumConfig{
            make_model(family, require(cfg.pre_param, "pre_param"), variance),
            make_model(family, require(cfg.post_param, "post_param"), variance)};
    }
    if (name == "gcusum") {
        qcd::GlrConfig glr;
        glr.family = family;
        glr.theta0 = {require(cfg.theta0_lo, "theta0_lo"), require(cfg.theta0_hi, "theta0_hi")};
        glr.theta1 = {require(cfg.theta1_lo, "theta1_lo"), require(cfg.theta1_hi, "theta1_hi")};
        glr.window = cfg.glr_window.value_or(200);
        glr.gaussian_variance = variance;
        qcd::validate_glr_config(glr);
        return glr;
    }
    if (name == "noniid") {
        return qcd::NoniidConfig{
            make_model(family, require(cfg.pre_param, "pre_param"), variance),
            make_model(family, require(cfg.post_param, "post_param"), variance),
            cfg.noniid_reset.value_or(false), cfg.noniid_window.value_or(200)};
    }
    if (name == "deviation") {
        if (training.empty()) {
            throw ConfigError("deviation detector needs training data to learn a baseline");
        }
        return build_deviation(cfg, training, bins);
    }
    throw ConfigError("unknown detector '" + name + "'");
}

// Pre-change model for threshold calibration: explicit when given, else the
// baseline spike rate.
qcd::ParametricModel calibration_pre_model(const Config& cfg, std::span<const double> training) {
    if (cfg.pre_param.has_value()) {
        return make_model(parse_family(cfg.family.value_or("bernoulli")), *cfg.pre_param,
                          cfg.gaussian_variance.value_or(1.0));
    }
    if (training.empty()) throw ConfigError("missing required setting: pre_param");
    const double rate = std::accumulate(training.begin(), training.end(), 0.0) /
                        static_cast<double>(training.size());
    return qcd::ParametricModel::bernoulli(rate);
}

double model_mean(const qcd::ParametricModel& model) {
    switch (model.family()) {
        case qcd::Family::Bernoulli:
        case qcd::Family::Poisson:
        case qcd::Family::GaussianMean:
            return model.primary_param();
        case qcd::Family::Ar1Gaussian:
            return 0.0;
    }
    return 0.0;
}

double model_variance(const qcd::ParametricModel& model) {
    switch (model.family()) {
        case qcd::Family::Bernoulli: {
            const double p = model.primary_param();
            return p * (1.0 - p);
        }
        case qcd::Family::Poisson:
            return model.primary_param();
        case qcd::Family::GaussianMean:
            return model.variance_param();
        case qcd::Family::Ar1Gaussian: {
            const double a = model.primary_param();
            return model.variance_param() / (1.0 - a * a);
        }
    }
    return 0.0;
}

// Detector for the synthetic pipelines (calibrate/evaluate): no data file,
// so a deviation statistic is assembled from config alone. mu0 defaults to
// the analytic pre-change mean of h where one exists.
qcd::DetectorConfig build_detector_for_synthetic(const Config& cfg) {
    const std::string name = require(cfg.detector, "detector");
    if (name != "deviation") return build_detector(cfg, {}, 0);

    const qcd::StatKind kind = parse_stat(cfg.stat.value_or("mean"));
    const bool spectral = kind == qcd::StatKind::SpectralMass;
    qcd::SummaryStatistic stat;
    stat.kind = kind;
    stat.window_length = cfg.window_length.value_or(spectral ? std::size_t{100} : std::size_t{1});
    stat.lambda = require(cfg.lambda, "lambda");

    const qcd::ParametricModel pre = calibration_pre_model(cfg, {});
    if (kind == qcd::StatKind::Entropy) stat.aux = pre;
    if (spectral && (cfg.band_lo.has_value() || cfg.band_hi.has_value())) {
        stat.band = qcd::FrequencyBand{cfg.band_lo.value_or(0.0),
                                       cfg.band_hi.value_or(std::numbers::pi)};
        qcd::validate_band(*stat.band);
    }

    if (cfg.mu0.has_value()) {
        stat.mu0 = *cfg.mu0;
    } else {
        switch (kind) {
            case qcd::StatKind::Mean:
                stat.mu0 = model_mean(pre);
                break;
            case qcd::StatKind::Variance:
                stat.center = model_mean(pre);
                stat.mu0 = model_variance(pre);
                break;
            case qcd::StatKind::Entropy: {
                if (pre.family() != qcd::Family::Bernoulli) {
                    throw ConfigError("entropy statistic needs an explicit mu0 for this family");
                }
                const double p = pre.primary_param();
                stat.mu0 = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
                break;
            }
            case qcd::StatKind::SpectralMass:
                throw ConfigError("spectral statistic needs an explicit mu0 here");
        }
    }
    qcd::validate_stat(stat);
    const std::size_t stride = cfg.stride.value_or(spectral ? stat.window_length : std::size_t{1});
    return qcd::DeviationConfig{stat, stride};
}

// --- subcommands ----------------------------------------------------------

int cmd_simulate(const Config& cfg) {
    qcd::Response response;
    response.kind = parse_response(cfg.response.value_or("immediate"));
    const std::size_t bins = cfg.bins.value_or(100);
    const std::size_t cue_bin = cfg.cue_bin.value_or(20);
    // Delayed default: elevation halfway into the post-cue window.
    response.offset_bins = cfg.offset_bins.value_or((bins - cue_bin) / 2);
    response.period_bins = cfg.period_bins.value_or(4);

    const qcd::SpikeTrialSet set = qcd::gen_trial_experiment(
        cfg.trials.value_or(45), bins, cfg.baseline_rate.value_or(0.05),
        cfg.post_rate.value_or(0.25), cfg.change_trial.value_or(16), cue_bin, response,
        cfg.seed.value_or(1), cfg.bin_width.value_or(0.01));

    const std::string out = cfg.out.value_or("spikes.csv");
    qcd::csv::write_spike_csv(set, out);
    std::cout << "wrote " << out << ": " << set.trials << " trials x " << set.bins
              << " bins, change at trial " << set.change_trial << " ("
              << qcd::response_kind_name(set.response.kind) << " response)\n";
    return kSuccess;
}

int cmd_detect(const Config& cfg) {
    const std::string input = require(cfg.input, "input data file");
    const qcd::SpikeTrialSet set = qcd::csv::read_spike_csv(input);
    const std::vector<double> observations = qcd::concat_trials(set);

    const std::size_t baseline_trials = cfg.baseline_trials.value_or(5);
    if (baseline_trials < 1 || baseline_trials >= set.trials) {
        throw ConfigError("baseline_trials must be >= 1 and below the trial count");
    }
    const std::span<const double> training(observations.data(), baseline_trials * set.bins);

    const qcd::DetectorConfig detector = build_detector(cfg, training, set.bins);

    if (cfg.threshold.has_value() == cfg.target_arl.has_value()) {
        throw ConfigError("give exactly one of threshold / target_arl");
    }
    double threshold = 0.0;
    if (cfg.threshold.has_value()) {
        threshold = *cfg.threshold;
    } else {
        qcd::CalibrationOptions options;
        options.max_length = cfg.max_length.value_or(10000);
        const qcd::CalibrationResult calibration = qcd::calibrate_threshold(
            detector, calibration_pre_model(cfg, training), *cfg.target_arl,
            cfg.runs.value_or(200), cfg.seed.value_or(1), options);
        if (!calibration.target_reached) {
            throw ConfigError("target ARL unreachable inside the calibration bracket");
        }
        threshold = calibration.threshold;
        log_info("calibrated threshold " + qcd::csv::format_double(threshold) +
                 " for target ARL " + qcd::csv::format_double(*cfg.target_arl));
    }

    const qcd::StoppingReport report = qcd::run_detector(detector, observations, threshold);
    const std::string out = cfg.out.value_or("report.csv");
    qcd::csv::write_report_csv(report, out);

    if (report.detected) {
        const std::size_t obs_index =
            qcd::stopping_observation_index(detector, *report.stopping_time);
        const std::size_t trial = (obs_index - 1) / set.bins + 1;
        std::cout << "detected: index " << *report.stopping_time << " (observation "
                  << obs_index << ", trial " << trial << "), statistic "
                  << qcd::csv::format_double(report.statistic_path.back()) << " > threshold "
                  << qcd::csv::format_double(threshold) << "; report in " << out << "\n";
        return kDetected;
    }
    std::cout << "no change detected over " << report.statistic_path.size()
              << " steps (threshold " << qcd::csv::format_double(threshold) << "); report in "
              << out << "\n";
    return kNoDetection;
}

int cmd_calibrate(const Config& cfg) {
    const qcd::DetectorConfig detector = build_detector_for_synthetic(cfg);
    qcd::CalibrationOptions options;
    options.max_length = cfg.max_length.value_or(10000);
    const qcd::CalibrationResult result = qcd::calibrate_threshold(
        detector, calibration_pre_model(cfg, {}), require(cfg.target_arl, "target_arl"),
        cfg.runs.value_or(500), cfg.seed.value_or(1), options);

    const std::string out = cfg.out.value_or("calibration.csv");
    qcd::csv::write_calibration_csv(result, out);
    std::cout << "threshold " << qcd::csv::format_double(result.threshold) << " -> ARL "
              << qcd::csv::format_double(result.estimated_arl)
              << (result.lower_bound ? " (lower bound, censored runs)" : "")
              << (result.target_reached ? "" : " [target unreachable]") << "; wrote " << out
              << "\n";
    return result.target_reached ? kSuccess : kConfigError;
}

int cmd_evaluate(const Config& cfg) {
    const qcd::DetectorConfig detector = build_detector_for_synthetic(cfg);
    const qcd::Family family = parse_family(cfg.family.value_or("bernoulli"));
    const double variance = cfg.gaussian_variance.value_or(1.0);
    qcd::ChangeSpec spec{
        make_model(family, require(cfg.pre_param, "pre_param"), variance),
        make_model(family, require(cfg.post_param, "post_param"), variance),
        cfg.change_point.value_or(500), cfg.length.value_or(2000)};
    const std::vector<double> thresholds = require(cfg.thresholds, "thresholds");
    if (thresholds.empty()) throw ConfigError("thresholds must not be empty");

    const std::vector<qcd::TradeoffRow> rows =
        qcd::tradeoff_table(detector, spec, thresholds, cfg.runs.value_or(500),
                            cfg.seed.value_or(1), cfg.max_length.value_or(10000));
    const std::string out = cfg.out.value_or("tradeoff.csv");
    qcd::csv::write_tradeoff_csv(rows, out);
    std::cout << "wrote " << out << ": " << rows.size() << " thresholds, " << cfg.runs.value_or(500)
              << " runs each\n";
    return kSuccess;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming quickest change detection toolkit"};
    app.require_subcommand(1);

    Config flags;
    std::string config_path;
    std::string positional_input;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override its values");
        cmd->add_option("--seed", flags.seed, "random seed");
        cmd->add_option("--out", flags.out, "output CSV path");
    };
    const auto add_detector_options = [&](CLI::App* cmd) {
        cmd->add_option("--detector", flags.detector, "cusum | gcusum | noniid | deviation");
        cmd->add_option("--family", flags.family, "bernoulli | poisson | gaussian | ar1");
        cmd->add_option("--pre-param", flags.pre_param, "pre-change primary parameter");
        cmd->add_option("--post-param", flags.post_param, "post-change primary parameter");
        cmd->add_option("--gaussian-variance", flags.gaussian_variance,
                        "known variance for the gaussian families");
        cmd->add_option("--threshold", flags.threshold, "detection threshold A");
        cmd->add_option("--target-arl", flags.target_arl,
                        "calibrate the threshold for this average run length");
        cmd->add_option("--stat", flags.stat, "mean | variance | entropy | spectral");
        cmd->add_option("--lambda", flags.lambda, "deviation slack (default 3*SE of mu0)");
        cmd->add_option("--mu0", flags.mu0, "baseline mean of the summary statistic");
        cmd->add_option("--window-length", flags.window_length, "summary window length");
        cmd->add_option("--stride", flags.stride, "summary window stride");
        cmd->add_option("--band-lo", flags.band_lo, "spectral band lower edge (rad)");
        cmd->add_option("--band-hi", flags.band_hi, "spectral band upper edge (rad)");
        cmd->add_option("--theta0-lo", flags.theta0_lo, "GLR pre-change interval lower edge");
        cmd->add_option("--theta0-hi", flags.theta0_hi, "GLR pre-change interval upper edge");
        cmd->add_option("--theta1-lo", flags.theta1_lo, "GLR post-change interval lower edge");
        cmd->add_option("--theta1-hi", flags.theta1_hi, "GLR post-change interval upper edge");
        cmd->add_option("--glr-window", flags.glr_window, "GLR candidate window");
        cmd->add_option("--noniid-window", flags.noniid_window, "non-iid candidate window");
        cmd->add_flag_callback(
            "--noniid-reset", [&flags] { flags.noniid_reset = true; },
            "restart conditioning at each candidate change point");
        cmd->add_option("--runs", flags.runs, "Monte Carlo runs");
        cmd->add_option("--max-length", flags.max_length, "Monte Carlo stream cap");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "write a synthetic spike experiment CSV");
    add_common(simulate);
    simulate->add_option("--trials", flags.trials, "number of trials");
    simulate->add_option("--bins", flags.bins, "bins per trial");
    simulate->add_option("--baseline-rate", flags.baseline_rate, "baseline firing probability");
    simulate->add_option("--post-rate", flags.post_rate, "post-change firing probability");
    simulate->add_option("--change-trial", flags.change_trial,
                         "first changed trial (trials+1 for none)");
    simulate->add_option("--cue-bin", flags.cue_bin, "cue position within a trial");
    simulate->add_option("--response", flags.response, "immediate | delayed | periodic");
    simulate->add_option("--offset-bins", flags.offset_bins, "delayed response offset");
    simulate->add_option("--period-bins", flags.period_bins, "periodic response period");
    simulate->add_option("--bin-width", flags.bin_width, "bin width in seconds");

    CLI::App* detect = app.add_subcommand("detect", "run a detector over a spike CSV");
    add_common(detect);
    add_detector_options(detect);
    detect->add_option("data", positional_input, "spike CSV file");
    detect->add_option("--input", flags.input, "spike CSV file (alternative to positional)");
    detect->add_option("--baseline-trials", flags.baseline_trials,
                       "trials used to learn the baseline (default 5)");

    CLI::App* calibrate = app.add_subcommand("calibrate", "pick a threshold for a target ARL");
    add_common(calibrate);
    add_detector_options(calibrate);

    std::vector<double> thresholds_flag;
    CLI::App* evaluate = app.add_subcommand("evaluate", "delay vs false alarm trade-off table");
    add_common(evaluate);
    add_detector_options(evaluate);
    evaluate->add_option("--thresholds", thresholds_flag, "thresholds to tabulate")
        ->delimiter(',');
    evaluate->add_option("--change-point", flags.change_point, "1-based change index");
    evaluate->add_option("--length", flags.length, "stream length per run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        Config cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (!positional_input.empty()) flags.input = positional_input;
        if (!thresholds_flag.empty()) flags.thresholds = thresholds_flag;
        merge(cfg, flags);

        if (simulate->parsed()) return cmd_simulate(cfg);
        if (detect->parsed()) return cmd_detect(cfg);
        if (calibrate->parsed()) return cmd_calibrate(cfg);
        if (evaluate->parsed()) return cmd_evaluate(cfg);
        return kConfigError;
    } catch (const qcd::csv::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
}
