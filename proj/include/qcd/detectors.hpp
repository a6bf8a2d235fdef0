#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qcd/models.hpp"
#include "qcd/summary.hpp"

namespace qcd {

/**
 * Running state of a one-sided sequential detector. A value type: step
 * functions take a state and return the successor. Once `stopped` is set it
 * never reverts, and stepping a stopped state is a no-op.
 */
struct DetectorState {
    double statistic = 0.0;
    std::size_t n = 0; // observations consumed
    double threshold = 0.0;
    bool stopped = false;
    std::optional<std::size_t> stopping_time;

    static DetectorState fresh(double threshold);
};

/// Outcome of one detector pass over a sequence. The statistic path holds
/// one value per consumed observation (runs stop consuming at the alarm).
struct StoppingReport {
    std::optional<std::size_t> stopping_time; // 1-based index of the alarm
    std::vector<double> statistic_path;
    double threshold = 0.0;
    bool detected = false;
};

/// One recursion step: statistic <- max(statistic + llr, 0), alarm on
/// statistic > threshold (strict). Non-finite increments are rejected.
DetectorState cusum_step(DetectorState state, double llr);

StoppingReport cusum_run(const ParametricModel& f0, const ParametricModel& f1,
                         std::span<const double> observations, double threshold);

/**
 * Statistic path by brute-force maximization over candidate change points,
 * including the no-change candidate that floors the statistic at zero.
 * O(n^2); the independent cross-check for the recursion.
 */
std::vector<double> cusum_maxform(const ParametricModel& f0, const ParametricModel& f1,
                                  std::span<const double> observations);

/**
 * Generalized CUSUM configuration: disjoint pre/post parameter intervals
 * over one iid exponential family, candidate change points limited to the
 * trailing `window` positions. GaussianMean uses `gaussian_variance` as the
 * fixed known variance.
 */
struct GlrConfig {
    Family family = Family::Bernoulli;
    ParameterSet theta0;
    ParameterSet theta1;
    std::size_t window = 200;
    double gaussian_variance = 1.0;
};

void validate_glr_config(const GlrConfig& config);

/// G_n for the full sequence (n = observations.size()). May be negative.
double gcusum_statistic(const GlrConfig& config, std::span<const double> observations);

StoppingReport gcusum_run(const GlrConfig& config, std::span<const double> observations,
                          double threshold);

/**
 * Non-iid CUSUM step where every candidate change point conditions on the
 * full history, which collapses the max over candidates to the scalar
 * recursion with conditional log likelihood ratio increments.
 */
DetectorState noniid_cusum_step_fullhistory(DetectorState state, const ParametricModel& f0,
                                            const ParametricModel& f1, double x,
                                            std::span<const double> history);

StoppingReport noniid_cusum_run_fullhistory(const ParametricModel& f0, const ParametricModel& f1,
                                            std::span<const double> observations,
                                            double threshold);

/**
 * Non-iid CUSUM with independent pre/post conditioning: each candidate k
 * restarts its conditioning at k (the first post-change conditional uses
 * conditional mean 0). Keeps one running sum per candidate in the trailing
 * window; the statistic is the max over candidates floored at zero.
 */
StoppingReport noniid_cusum_run_reset(const ParametricModel& f0, const ParametricModel& f1,
                                      std::span<const double> observations, double threshold,
                                      std::size_t window);

/// Deviation step: statistic <- max(statistic + h - mu0 - lambda, 0).
DetectorState deviation_cusum_step(DetectorState state, double h_value, double mu0,
                                   double lambda);

/**
 * Slides a window of stat.window_length over the observations by `stride`,
 * evaluating h and folding deviation steps. Time indices in the report
 * count evaluated windows, not raw samples.
 */
StoppingReport deviation_cusum_run(const SummaryStatistic& stat,
                                   std::span<const double> observations, double threshold,
                                   std::size_t stride);

// --- uniform front door used by the evaluation harness and the CLI ---

struct CusumConfig {
    ParametricModel f0;
    ParametricModel f1;
};

struct NoniidConfig {
    ParametricModel f0;
    ParametricModel f1;
    bool reset_conditioning = false; // per-candidate restart instead of full history
    std::size_t window = 200;
};

struct DeviationConfig {
    SummaryStatistic stat;
    std::size_t stride = 1;
};

using DetectorConfig = std::variant<GlrConfig, CusumConfig, NoniidConfig, DeviationConfig>;

StoppingReport run_detector(const DetectorConfig& config, std::span<const double> observations,
                            double threshold);

/// Observation index corresponding to a report's stopping time: the window
/// end for the deviation detector, the identity otherwise.
std::size_t stopping_observation_index(const DetectorConfig& config, std::size_t stopping_time);

} // namespace qcd
