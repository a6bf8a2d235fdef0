#pragma once

#include <optional>
#include <span>

#include "qcd/models.hpp"
#include "qcd/spectral.hpp"

namespace qcd {

enum class StatKind { Mean, Variance, Entropy, SpectralMass };

const char* stat_kind_name(StatKind kind) noexcept;

/**
 * Window functional h for the deviation detector together with its learned
 * baseline mean mu0 and slack lambda.
 *
 * window_length is the number of samples handed to h. The scalar statistics
 * (Mean, Variance, Entropy) only look at the last sample and accept a
 * window of 1; SpectralMass feeds the whole window to the periodogram and
 * needs at least 4 samples.
 *
 * Detection is one-sided (an increase in E[h]); negate h upstream to watch
 * for decreases.
 */
struct SummaryStatistic {
    StatKind kind = StatKind::Mean;
    std::size_t window_length = 1;
    double mu0 = 0.0;
    double lambda = 0.0;
    std::optional<ParametricModel> aux;  // pre-change density, Entropy only
    std::optional<FrequencyBand> band;   // SpectralMass restriction; full band when absent
    double center = 0.0;                 // mean subtracted by Variance
};

SummaryStatistic make_mean_stat(std::size_t window_length, double mu0, double lambda);
SummaryStatistic make_variance_stat(std::size_t window_length, double mu0, double lambda,
                                    double center = 0.0);
SummaryStatistic make_entropy_stat(std::size_t window_length, double mu0, double lambda,
                                   ParametricModel pre_density);
SummaryStatistic make_spectral_stat(std::size_t window_length, double mu0, double lambda,
                                    std::optional<FrequencyBand> band = std::nullopt);

void validate_stat(const SummaryStatistic& stat);

/**
 * h applied to one window. Mean -> last sample; Variance -> squared
 * deviation of the last sample from `center`; Entropy -> -log f0(last);
 * SpectralMass -> band-restricted mass of the window periodogram.
 */
double evaluate(const SummaryStatistic& stat, std::span<const double> window);

/// Empirical mean of h over stride-spaced windows of the training segment.
/// The stat's mu0 field is ignored; everything else (aux, band, center) is used.
double learn_baseline(const SummaryStatistic& stat, std::span<const double> training,
                      std::size_t stride);

/// Copy of `stat` with mu0 learned from training data. For Variance the
/// centering mean is refit from the training segment first.
SummaryStatistic with_learned_baseline(SummaryStatistic stat, std::span<const double> training,
                                       std::size_t stride);

} // namespace qcd
