#include "qcd/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcd {

namespace {

void validate_threshold(double threshold) {
    if (std::isnan(threshold) || threshold < 0.0) {
        throw std::invalid_argument("threshold must be nonnegative");
    }
}

double require_finite_increment(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
    return v;
}

DetectorState advance(DetectorState state, double new_statistic) {
    state.statistic = new_statistic;
    state.n += 1;
    if (state.statistic > state.threshold) {
        state.stopped = true;
        state.stopping_time = state.n;
    }
    return state;
}

StoppingReport finish(const DetectorState& state) {
    StoppingReport report;
    report.threshold = state.threshold;
    report.stopping_time = state.stopping_time;
    report.detected = state.stopped;
    return report;
}

} // namespace

DetectorState DetectorState::fresh(double threshold) {
    validate_threshold(threshold);
    DetectorState s;
    s.threshold = threshold;
    return s;
}

DetectorState cusum_step(DetectorState state, double llr) {
    require_finite_increment(llr, "log likelihood ratio");
    if (state.stopped) return state;
    return advance(state, std::max(state.statistic + llr, 0.0));
}

StoppingReport cusum_run(const ParametricModel& f0, const ParametricModel& f1,
                         std::span<const double> observations, double threshold) {
    if (f0.family() != f1.family()) {
        throw std::invalid_argument("cusum_run requires models of the same family");
    }
    DetectorState state = DetectorState::fresh(threshold);
    StoppingReport report = finish(state);
    report.statistic_path.reserve(observations.size());
    for (double x : observations) {
        state = cusum_step(state, log_likelihood_ratio(f0, f1, x));
        report.statistic_path.push_back(state.statistic);
        if (state.stopped) break;
    }
    report.stopping_time = state.stopping_time;
    report.detected = state.stopped;
    return report;
}

std::vector<double> cusum_maxform(const ParametricModel& f0, const ParametricModel& f1,
                                  std::span<const double> observations) {
    std::vector<double> llr(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        llr[i] = log_likelihood_ratio(f0, f1, observations[i]);
    }
    std::vector<double> path(observations.size());
    for (std::size_t n = 1; n <= observations.size(); ++n) {
        double best = 0.0; // the k = n+1 (no change) candidate
        double suffix = 0.0;
        for (std::size_t k = n; k >= 1; --k) {
            suffix += llr[k - 1];
            best = std::max(best, suffix);
        }
        path[n - 1] = best;
    }
    return path;
}

void validate_glr_config(const GlrConfig& config) {
    if (config.family == Family::Ar1Gaussian) {
        throw std::invalid_argument("gcusum supports the iid exponential families only");
    }
    validate_parameter_set(config.family, config.theta0);
    validate_parameter_set(config.family, config.theta1);
    if (!disjoint(config.theta0, config.theta1)) {
        throw std::invalid_argument("gcusum parameter sets must be disjoint");
    }
    if (config.window < 2) {
        throw std::invalid_argument("gcusum window must be >= 2");
    }
    if (config.family == Family::GaussianMean && !(config.gaussian_variance > 0.0)) {
        throw std::invalid_argument("gcusum gaussian variance must be positive");
    }
}

namespace {

// Incremental GLR engine. Prefix sums of the sufficient statistics make the
// constrained segment MLE and segment log-likelihood O(1), so each step
// costs O(window).
class GcusumEngine {
public:
    explicit GcusumEngine(const GlrConfig& config) : config_(config) {
        validate_glr_config(config);
        theta0_ = clamp_set(config.theta0);
        theta1_ = clamp_set(config.theta1);
        sum_.push_back(0.0);
        sumsq_.push_back(0.0);
        lgamma_.push_back(0.0);
    }

    /// Consumes one observation and returns G_n.
    double push(double x) {
        if (!in_support(config_.family, x)) {
            throw std::domain_error("gcusum observation outside family support");
        }
        sum_.push_back(sum_.back() + x);
        sumsq_.push_back(sumsq_.back() + x * x);
        lgamma_.push_back(lgamma_.back() +
                          (config_.family == Family::Poisson ? std::lgamma(x + 1.0) : 0.0));
        n_ += 1;

        const double null_term = max_loglik(0, n_, theta0_);
        const std::size_t k_lo = n_ > config_.window ? n_ - config_.window + 1 : 1;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = k_lo; k <= n_; ++k) {
            const double pre = k > 1 ? max_loglik(0, k - 1, theta0_) : 0.0;
            const double post = max_loglik(k - 1, n_, theta1_);
            best = std::max(best, pre + post - null_term);
        }
        return best;
    }

private:
    // Bernoulli MLEs are kept inside the same clamp as the model parameters
    // so segment log-likelihoods stay finite.
    ParameterSet clamp_set(ParameterSet set) const {
        if (config_.family == Family::Bernoulli) {
            set.lower = std::max(set.lower, kBernoulliEps);
            set.upper = std::min(set.upper, 1.0 - kBernoulliEps);
        }
        return set;
    }

    // Max over theta in `set` of the log likelihood of observations
    // (begin, end], 0-based half-open in prefix coordinates.
    double max_loglik(std::size_t begin, std::size_t end, const ParameterSet& set) const {
        const double m = static_cast<double>(end - begin);
        const double s = sum_[end] - sum_[begin];
        const double theta = std::clamp(s / m, set.lower, set.upper);
        switch (config_.family) {
            case Family::Bernoulli:
                return s * std::log(theta) + (m - s) * std::log(1.0 - theta);
            case Family::Poisson:
                return s * std::log(theta) - m * theta - (lgamma_[end] - lgamma_[begin]);
            case Family::GaussianMean: {
                const double v = config_.gaussian_variance;
                const double sq = sumsq_[end] - sumsq_[begin];
                return -0.5 * m * std::log(2.0 * std::numbers::pi * v) -
                       (sq - 2.0 * theta * s + m * theta * theta) / (2.0 * v);
            }
            case Family::Ar1Gaussian:
                break;
        }
        throw std::logic_error("unreachable family");
    }

    GlrConfig config_;
    ParameterSet theta0_;
    ParameterSet theta1_;
    std::vector<double> sum_;
    std::vector<double> sumsq_;
    std::vector<double> lgamma_;
    std::size_t n_ = 0;
};

} // namespace

double gcusum_statistic(const GlrConfig& config, std::span<const double> observations) {
    if (observations.empty()) {
        throw std::invalid_argument("gcusum_statistic requires at least one observation");
    }
    GcusumEngine engine(config);
    double g = 0.0;
    for (double x : observations) g = engine.push(x);
    return g;
}

StoppingReport gcusum_run(const GlrConfig& config, std::span<const double> observations,
                          double threshold) {
    validate_threshold(threshold);
    GcusumEngine engine(config);
    StoppingReport report;
    report.threshold = threshold;
    report.statistic_path.reserve(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const double g = engine.push(observations[i]);
        report.statistic_path.push_back(g);
        if (g > threshold) {
            report.stopping_time = i + 1;
            report.detected = true;
            break;
        }
    }
    return report;
}

DetectorState noniid_cusum_step_fullhistory(DetectorState state, const ParametricModel& f0,
                                            const ParametricModel& f1, double x,
                                            std::span<const double> history) {
    const double inc = log_likelihood_ratio(f0, f1, x, history);
    return cusum_step(state, inc);
}

StoppingReport noniid_cusum_run_fullhistory(const ParametricModel& f0, const ParametricModel& f1,
                                            std::span<const double> observations,
                                            double threshold) {
    DetectorState state = DetectorState::fresh(threshold);
    StoppingReport report = finish(state);
    report.statistic_path.reserve(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        state = noniid_cusum_step_fullhistory(state, f0, f1, observations[i],
                                              observations.first(i));
        report.statistic_path.push_back(state.statistic);
        if (state.stopped) break;
    }
    report.stopping_time = state.stopping_time;
    report.detected = state.stopped;
    return report;
}

StoppingReport noniid_cusum_run_reset(const ParametricModel& f0, const ParametricModel& f1,
                                      std::span<const double> observations, double threshold,
                                      std::size_t window) {
    if (f0.family() != f1.family()) {
        throw std::invalid_argument("noniid_cusum_run_reset requires models of the same family");
    }
    if (window < 2) {
        throw std::invalid_argument("noniid_cusum_run_reset window must be >= 2");
    }
    validate_threshold(threshold);

    StoppingReport report;
    report.threshold = threshold;
    report.statistic_path.reserve(observations.size());

    // candidates.front() is the oldest candidate change point in the window;
    // candidate k's sum conditions on x_k.. only (standing start at k).
    std::deque<double> candidates;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const double x = observations[i];
        if (i > 0) {
            const auto history = observations.subspan(i - 1, 1);
            const double inc = require_finite_increment(
                log_likelihood_ratio(f0, f1, x, history), "conditional log likelihood ratio");
            for (double& s : candidates) s += inc;
        }
        const double fresh = require_finite_increment(log_likelihood_ratio(f0, f1, x),
                                                      "conditional log likelihood ratio");
        candidates.push_back(fresh);
        if (candidates.size() > window) candidates.pop_front();

        double stat = 0.0;
        for (double s : candidates) stat = std::max(stat, s);
        report.statistic_path.push_back(stat);
        if (stat > threshold) {
            report.stopping_time = i + 1;
            report.detected = true;
            break;
        }
    }
    return report;
}

DetectorState deviation_cusum_step(DetectorState state, double h_value, double mu0,
                                   double lambda) {
    require_finite_increment(h_value, "summary statistic value");
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("deviation slack lambda must be positive");
    }
    if (state.stopped) return state;
    return advance(state, std::max(state.statistic + h_value - mu0 - lambda, 0.0));
}

StoppingReport deviation_cusum_run(const SummaryStatistic& stat,
                                   std::span<const double> observations, double threshold,
                                   std::size_t stride) {
    validate_stat(stat);
    if (stride < 1) {
        throw std::invalid_argument("stride must be >= 1");
    }
    if (observations.size() < stat.window_length) {
        throw std::invalid_argument("sequence shorter than one summary window");
    }
    DetectorState state = DetectorState::fresh(threshold);
    StoppingReport report = finish(state);
    for (std::size_t start = 0; start + stat.window_length <= observations.size();
         start += stride) {
        const double h = evaluate(stat, observations.subspan(start, stat.window_length));
        state = deviation_cusum_step(state, h, stat.mu0, stat.lambda);
        report.statistic_path.push_back(state.statistic);
        if (state.stopped) break;
    }
    report.stopping_time = state.stopping_time;
    report.detected = state.stopped;
    return report;
}

StoppingReport run_detector(const DetectorConfig& config, std::span<const double> observations,
                            double threshold) {
    return std::visit(
        [&](const auto& c) -> StoppingReport {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CusumConfig>) {
                return cusum_run(c.f0, c.f1, observations, threshold);
            } else if constexpr (std::is_same_v<T, GlrConfig>) {
                return gcusum_run(c, observations, threshold);
            } else if constexpr (std::is_same_v<T, NoniidConfig>) {
                if (c.reset_conditioning) {
                    return noniid_cusum_run_reset(c.f0, c.f1, observations, threshold, c.window);
                }
                return noniid_cusum_run_fullhistory(c.f0, c.f1, observations, threshold);
            } else {
                return deviation_cusum_run(c.stat, observations, threshold, c.stride);
            }
        },
        config);
}

std::size_t stopping_observation_index(const DetectorConfig& config, std::size_t stopping_time) {
    if (const auto* dev = std::get_if<DeviationConfig>(&config)) {
        return (stopping_time - 1) * dev->stride + dev->stat.window_length;
    }
    return stopping_time;
}

} // namespace qcd
