#include "qcd/eval.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcd {

namespace {

struct MomentAccumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    std::size_t count = 0;

    void add(double v) {
        sum += v;
        sumsq += v * v;
        count += 1;
    }
    double mean() const { return sum / static_cast<double>(count); }
    double std_error() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
        return std::sqrt(var / n);
    }
};

} // namespace

CalibrationResult estimate_arl(const DetectorConfig& config, const ParametricModel& pre_model,
                               double threshold, std::size_t runs, std::size_t max_length,
                               std::uint64_t seed) {
    if (runs < 1 || max_length < 1) {
        throw std::invalid_argument("estimate_arl needs runs >= 1 and max_length >= 1");
    }
    CalibrationResult result;
    result.threshold = threshold;
    result.runs = runs;

    MomentAccumulator acc;
    std::vector<double> stream;
    for (std::size_t i = 0; i < runs; ++i) {
        SplitMix64 rng(derive_seed(seed, i));
        sample_into(pre_model, max_length, rng, stream);
        const StoppingReport report = run_detector(config, stream, threshold);
        if (report.detected) {
            acc.add(static_cast<double>(
                stopping_observation_index(config, *report.stopping_time)));
        } else {
            acc.add(static_cast<double>(max_length));
            result.censored_runs += 1;
        }
    }
    result.estimated_arl = acc.mean();
    result.arl_std_error = acc.std_error();
    result.lower_bound = result.censored_runs > 0;
    return result;
}

DelayResult estimate_delay(const DetectorConfig& config, const ChangeSpec& spec,
                           double threshold, std::size_t runs, std::uint64_t seed) {
    if (runs < 1) {
        throw std::invalid_argument("estimate_delay needs runs >= 1");
    }
    validate_change_spec(spec);
    DelayResult result;
    result.threshold = threshold;
    result.runs = runs;

    MomentAccumulator acc;
    for (std::size_t i = 0; i < runs; ++i) {
        const std::vector<double> stream = gen_iid_change(spec, derive_seed(seed, i));
        const StoppingReport report = run_detector(config, stream, threshold);
        if (!report.detected) {
            result.censored += 1;
            continue;
        }
        const std::size_t tau = stopping_observation_index(config, *report.stopping_time);
        if (tau < spec.change_point) {
            result.missed += 1; // alarm before the change: a false alarm, not a detection
            continue;
        }
        acc.add(static_cast<double>(tau - spec.change_point));
    }
    if (acc.count == 0) {
        result.mean_delay = std::numeric_limits<double>::quiet_NaN();
        result.delay_std_error = std::numeric_limits<double>::quiet_NaN();
        result.flagged = true;
    } else {
        result.mean_delay = acc.mean();
        result.delay_std_error = acc.std_error();
    }
    return result;
}

CalibrationResult calibrate_threshold(const DetectorConfig& config,
                                      const ParametricModel& pre_model, double target_arl,
                                      std::size_t runs, std::uint64_t seed,
                                      const CalibrationOptions& options) {
    if (!(target_arl > 1.0)) {
        throw std::invalid_argument("calibrate_threshold needs target_arl > 1");
    }
    if (!(options.bracket_lo > 0.0) || options.bracket_lo >= options.bracket_hi) {
        throw std::invalid_argument("calibration bracket must satisfy 0 < lo < hi");
    }

    const auto arl_at = [&](double threshold) {
        return estimate_arl(config, pre_model, threshold, runs, options.max_length, seed);
    };

    CalibrationResult at_lo = arl_at(options.bracket_lo);
    if (at_lo.estimated_arl >= target_arl) {
        return at_lo; // the whole bracket reaches the target
    }
    CalibrationResult best = arl_at(options.bracket_hi);
    if (best.estimated_arl < target_arl) {
        best.target_reached = false; // unreachable inside the bracket
        return best;
    }

    double lo = options.bracket_lo;
    double hi = options.bracket_hi;
    for (int iter = 0; iter < options.max_iters; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const CalibrationResult at_mid = arl_at(mid);
        if (at_mid.estimated_arl >= target_arl) {
            hi = mid;
            best = at_mid;
            if (std::abs(at_mid.estimated_arl - target_arl) <= options.rel_tol * target_arl) {
                break;
            }
        } else {
            lo = mid;
        }
    }
    return best;
}

std::vector<TradeoffRow> tradeoff_table(const DetectorConfig& config, const ChangeSpec& spec,
                                        std::span<const double> thresholds, std::size_t runs,
                                        std::uint64_t seed, std::size_t max_length) {
    if (thresholds.empty()) {
        throw std::invalid_argument("tradeoff_table needs at least one threshold");
    }
    std::vector<TradeoffRow> rows;
    rows.reserve(thresholds.size());
    for (double threshold : thresholds) {
        const CalibrationResult arl =
            estimate_arl(config, spec.pre, threshold, runs, max_length, seed);
        const DelayResult delay = estimate_delay(config, spec, threshold, runs, seed);
        rows.push_back({threshold, arl.estimated_arl, arl.lower_bound, delay.mean_delay,
                        delay.missed, delay.censored});
    }
    return rows;
}

} // namespace qcd
