#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qcd/models.hpp"

namespace qcd {

/// Change point value meaning "the change never happens".
inline constexpr std::size_t kNoChange = std::numeric_limits<std::size_t>::max();

/// An iid sequence whose law switches from `pre` to `post` at the 1-based
/// index `change_point` (length + 1 or kNoChange for no change at all).
struct ChangeSpec {
    ParametricModel pre;
    ParametricModel post;
    std::size_t change_point = kNoChange;
    std::size_t length = 0;
};

void validate_change_spec(const ChangeSpec& spec);

std::vector<double> gen_iid_change(const ChangeSpec& spec, std::uint64_t seed);

enum class ResponseKind { Immediate, Delayed, Periodic };

const char* response_kind_name(ResponseKind kind) noexcept;

/// Post-change firing pattern of a trial, relative to the cue bin.
struct Response {
    ResponseKind kind = ResponseKind::Immediate;
    std::size_t offset_bins = 0; // Delayed: elevation starts at cue + offset
    std::size_t period_bins = 4; // Periodic: spacing of elevated bins
};

/**
 * Binned spike data for a trial-structured experiment: a trials x bins
 * binary matrix (row-major) with the event metadata needed to interpret it.
 * change_trial is 1-based; trials + 1 means no trial ever changes.
 */
struct SpikeTrialSet {
    std::vector<std::uint8_t> spikes;
    std::size_t trials = 0;
    std::size_t bins = 0;
    double bin_width = 0.01; // seconds
    std::size_t change_trial = 1;
    std::size_t cue_bin = 0;
    Response response;

    std::uint8_t at(std::size_t trial, std::size_t bin) const {
        return spikes[trial * bins + bin];
    }
    std::span<const std::uint8_t> row(std::size_t trial) const {
        return {spikes.data() + trial * bins, bins};
    }
};

/**
 * Synthetic spike experiment. Trials before change_trial are
 * Bernoulli(baseline_rate) in every bin. From change_trial on, bins before
 * the cue stay at baseline and bins from the cue follow the response:
 *  - Immediate: Bernoulli(post_rate) from cue_bin to the end of the trial
 *  - Delayed:   elevation starts at cue_bin + offset_bins instead
 *  - Periodic:  every period-th bin from the cue fires at post_rate, the
 *               other post-cue bins at the rate that keeps the expected
 *               per-trial spike count at baseline (clamped to [0, 1])
 */
SpikeTrialSet gen_trial_experiment(std::size_t trials, std::size_t bins, double baseline_rate,
                                   double post_rate, std::size_t change_trial,
                                   std::size_t cue_bin, const Response& response,
                                   std::uint64_t seed, double bin_width = 0.01);

/// Row-major flattening, trial 1 first; length = trials * bins.
std::vector<double> concat_trials(const SpikeTrialSet& set);

/// Off-bin rate used by the Periodic response for the given geometry.
double periodic_off_rate(std::size_t bins, std::size_t cue_bin, std::size_t period,
                         double baseline_rate, double post_rate);

} // namespace qcd
