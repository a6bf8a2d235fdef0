#include "qcd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcd {

void validate_change_spec(const ChangeSpec& spec) {
    if (spec.pre.family() != spec.post.family()) {
        throw std::invalid_argument("change spec pre and post must share a family");
    }
    if (spec.length < 1) {
        throw std::invalid_argument("change spec length must be >= 1");
    }
    if (spec.change_point < 1) {
        throw std::invalid_argument("change point is 1-based and must be >= 1");
    }
    if (spec.change_point != kNoChange && spec.change_point > spec.length + 1) {
        throw std::invalid_argument("change point must be <= length + 1 (or kNoChange)");
    }
}

std::vector<double> gen_iid_change(const ChangeSpec& spec, std::uint64_t seed) {
    validate_change_spec(spec);
    SplitMix64 rng(seed);
    const std::size_t pre_len =
        spec.change_point == kNoChange ? spec.length
                                       : std::min(spec.change_point - 1, spec.length);
    std::vector<double> out;
    std::vector<double> tail;
    sample_into(spec.pre, pre_len, rng, out);
    if (pre_len < spec.length) {
        sample_into(spec.post, spec.length - pre_len, rng, tail);
        out.insert(out.end(), tail.begin(), tail.end());
    }
    return out;
}

const char* response_kind_name(ResponseKind kind) noexcept {
    switch (kind) {
        case ResponseKind::Immediate: return "immediate";
        case ResponseKind::Delayed: return "delayed";
        case ResponseKind::Periodic: return "periodic";
    }
    return "unknown";
}

double periodic_off_rate(std::size_t bins, std::size_t cue_bin, std::size_t period,
                         double baseline_rate, double post_rate) {
    const std::size_t post_window = bins - cue_bin;
    const std::size_t on_bins = (post_window + period - 1) / period;
    const std::size_t off_bins = post_window - on_bins;
    if (off_bins == 0) return 0.0;
    const double target = static_cast<double>(post_window) * baseline_rate;
    const double rate = (target - static_cast<double>(on_bins) * post_rate) /
                        static_cast<double>(off_bins);
    return std::clamp(rate, 0.0, 1.0);
}

SpikeTrialSet gen_trial_experiment(std::size_t trials, std::size_t bins, double baseline_rate,
                                   double post_rate, std::size_t change_trial,
                                   std::size_t cue_bin, const Response& response,
                                   std::uint64_t seed, double bin_width) {
    if (trials < 1 || bins < 1) {
        throw std::invalid_argument("trial experiment needs trials >= 1 and bins >= 1");
    }
    if (!(baseline_rate > 0.0 && baseline_rate < 1.0) ||
        !(post_rate > 0.0 && post_rate < 1.0)) {
        throw std::invalid_argument("firing rates must lie in (0, 1)");
    }
    if (change_trial < 1 || change_trial > trials + 1) {
        throw std::invalid_argument("change trial must lie in [1, trials + 1]");
    }
    if (cue_bin >= bins) {
        throw std::invalid_argument("cue bin must be < bins");
    }
    if (response.kind == ResponseKind::Periodic && response.period_bins < 1) {
        throw std::invalid_argument("periodic response needs period >= 1");
    }
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("bin width must be positive");
    }

    SpikeTrialSet set;
    set.trials = trials;
    set.bins = bins;
    set.bin_width = bin_width;
    set.change_trial = change_trial;
    set.cue_bin = cue_bin;
    set.response = response;
    set.spikes.resize(trials * bins);

    const double off_rate = response.kind == ResponseKind::Periodic
                                ? periodic_off_rate(bins, cue_bin, response.period_bins,
                                                    baseline_rate, post_rate)
                                : 0.0;

    SplitMix64 rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const bool changed = trial + 1 >= change_trial;
        for (std::size_t bin = 0; bin < bins; ++bin) {
            double rate = baseline_rate;
            if (changed && bin >= cue_bin) {
                switch (response.kind) {
                    case ResponseKind::Immediate:
                        rate = post_rate;
                        break;
                    case ResponseKind::Delayed:
                        if (bin >= cue_bin + response.offset_bins) rate = post_rate;
                        break;
                    case ResponseKind::Periodic:
                        rate = (bin - cue_bin) % response.period_bins == 0 ? post_rate
                                                                           : off_rate;
                        break;
                }
            }
            set.spikes[trial * bins + bin] = rng.next_double() < rate ? 1 : 0;
        }
    }
    return set;
}

std::vector<double> concat_trials(const SpikeTrialSet& set) {
    if (set.trials == 0 || set.spikes.size() != set.trials * set.bins) {
        throw std::invalid_argument("spike trial set is empty or inconsistent");
    }
    std::vector<double> out;
    out.reserve(set.spikes.size());
    for (std::uint8_t s : set.spikes) out.push_back(static_cast<double>(s));
    return out;
}

} // namespace qcd
