#include "qcd/summary.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qcd {

const char* stat_kind_name(StatKind kind) noexcept {
    switch (kind) {
        case StatKind::Mean: return "mean";
        case StatKind::Variance: return "variance";
        case StatKind::Entropy: return "entropy";
        case StatKind::SpectralMass: return "spectral";
    }
    return "unknown";
}

void validate_stat(const SummaryStatistic& stat) {
    if (stat.window_length < 1) {
        throw std::invalid_argument("summary statistic window_length must be >= 1");
    }
    if (!(stat.lambda > 0.0) || !std::isfinite(stat.lambda)) {
        throw std::invalid_argument("summary statistic lambda must be positive");
    }
    if (stat.kind == StatKind::Entropy && !stat.aux.has_value()) {
        throw std::invalid_argument("entropy statistic needs the pre-change density");
    }
    if (stat.kind == StatKind::SpectralMass) {
        if (stat.window_length < 4) {
            throw std::invalid_argument("spectral statistic needs window_length >= 4");
        }
        if (stat.band.has_value()) validate_band(*stat.band);
    }
    if (!std::isfinite(stat.mu0) || !std::isfinite(stat.center)) {
        throw std::invalid_argument("summary statistic mu0/center must be finite");
    }
}

SummaryStatistic make_mean_stat(std::size_t window_length, double mu0, double lambda) {
    SummaryStatistic s{StatKind::Mean, window_length, mu0, lambda, {}, {}, 0.0};
    validate_stat(s);
    return s;
}

SummaryStatistic make_variance_stat(std::size_t window_length, double mu0, double lambda,
                                    double center) {
    SummaryStatistic s{StatKind::Variance, window_length, mu0, lambda, {}, {}, center};
    validate_stat(s);
    return s;
}

SummaryStatistic make_entropy_stat(std::size_t window_length, double mu0, double lambda,
                                   ParametricModel pre_density) {
    SummaryStatistic s{StatKind::Entropy, window_length, mu0, lambda, std::move(pre_density),
                       {}, 0.0};
    validate_stat(s);
    return s;
}

SummaryStatistic make_spectral_stat(std::size_t window_length, double mu0, double lambda,
                                    std::optional<FrequencyBand> band) {
    SummaryStatistic s{StatKind::SpectralMass, window_length, mu0, lambda, {}, band, 0.0};
    validate_stat(s);
    return s;
}

double evaluate(const SummaryStatistic& stat, std::span<const double> window) {
    if (window.size() != stat.window_length) {
        throw std::invalid_argument("window length does not match the summary statistic");
    }
    switch (stat.kind) {
        case StatKind::Mean:
            return window.back();
        case StatKind::Variance: {
            const double d = window.back() - stat.center;
            return d * d;
        }
        case StatKind::Entropy:
            if (!stat.aux.has_value()) {
                throw std::invalid_argument("entropy statistic needs the pre-change density");
            }
            return -stat.aux->log_density(window.back());
        case StatKind::SpectralMass: {
            const SpectrumEstimate est = periodogram(window);
            if (stat.band.has_value()) return spectral_mass(est, *stat.band);
            return total_spectral_mass(est);
        }
    }
    throw std::logic_error("unreachable statistic kind");
}

double learn_baseline(const SummaryStatistic& stat, std::span<const double> training,
                      std::size_t stride) {
    if (stride < 1) {
        throw std::invalid_argument("stride must be >= 1");
    }
    if (training.size() < stat.window_length) {
        throw std::invalid_argument("training segment shorter than one window");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start + stat.window_length <= training.size(); start += stride) {
        sum += evaluate(stat, training.subspan(start, stat.window_length));
        ++count;
    }
    return sum / static_cast<double>(count);
}

SummaryStatistic with_learned_baseline(SummaryStatistic stat, std::span<const double> training,
                                       std::size_t stride) {
    if (stat.kind == StatKind::Variance) {
        stat.center = std::accumulate(training.begin(), training.end(), 0.0) /
                      static_cast<double>(training.size());
    }
    stat.mu0 = learn_baseline(stat, training, stride);
    return stat;
}

} // namespace qcd
