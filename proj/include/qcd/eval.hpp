#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qcd/detectors.hpp"
#include "qcd/simulate.hpp"

namespace qcd {

/**
 * Average-run-length estimate at one threshold. Runs that hit max_length
 * without an alarm are censored and contribute max_length, so with
 * censored_runs > 0 the estimate is a lower bound (`lower_bound` is set).
 */
struct CalibrationResult {
    double threshold = 0.0;
    double estimated_arl = 0.0;
    double arl_std_error = 0.0;
    std::size_t runs = 0;
    std::size_t censored_runs = 0;
    bool lower_bound = false;
    bool target_reached = true; // calibrate_threshold: bracket held the target
};

/**
 * Detection-delay estimate. Delay is tau - gamma over runs with tau >= gamma
 * (in observation index units). Runs alarming before the change are counted
 * in `missed` and excluded; runs that never alarm are counted in `censored`.
 * With no usable run the estimate is NaN and `flagged` is set.
 */
struct DelayResult {
    double threshold = 0.0;
    double mean_delay = 0.0;
    double delay_std_error = 0.0;
    std::size_t missed = 0;
    std::size_t censored = 0;
    std::size_t runs = 0;
    bool flagged = false;
};

struct TradeoffRow {
    double threshold = 0.0;
    double estimated_arl = 0.0;
    bool arl_lower_bound = false;
    double mean_delay = 0.0;
    std::size_t missed = 0;
    std::size_t censored = 0;
};

/**
 * Simulates pre-change-only streams from `pre_model` and records stopping
 * times. Run i draws its stream from derive_seed(seed, i), so results are
 * reproducible and two calls with different thresholds see the same data
 * (common random numbers).
 */
CalibrationResult estimate_arl(const DetectorConfig& config, const ParametricModel& pre_model,
                               double threshold, std::size_t runs, std::size_t max_length,
                               std::uint64_t seed);

/// Streams generated by gen_iid_change(spec, derive_seed(seed, i)).
DelayResult estimate_delay(const DetectorConfig& config, const ChangeSpec& spec,
                           double threshold, std::size_t runs, std::uint64_t seed);

struct CalibrationOptions {
    double bracket_lo = 0.1;
    double bracket_hi = 50.0;
    double rel_tol = 0.2;     // stop when |ARL - target| <= rel_tol * target
    int max_iters = 12;       // bisection iterations
    std::size_t max_length = 10000;
};

/**
 * Bisection on the threshold over [bracket_lo, bracket_hi], exploiting that
 * the run length is nondecreasing in the threshold. Returns the smallest
 * tested threshold whose estimated ARL reaches the target; target_reached
 * is false when even the top of the bracket falls short.
 */
CalibrationResult calibrate_threshold(const DetectorConfig& config,
                                      const ParametricModel& pre_model, double target_arl,
                                      std::size_t runs, std::uint64_t seed,
                                      const CalibrationOptions& options = {});

/// One row per threshold, pairing the ARL under spec.pre with the delay on
/// changed streams, both on common random numbers across thresholds.
std::vector<TradeoffRow> tradeoff_table(const DetectorConfig& config, const ChangeSpec& spec,
                                        std::span<const double> thresholds, std::size_t runs,
                                        std::uint64_t seed, std::size_t max_length = 10000);

} // namespace qcd
