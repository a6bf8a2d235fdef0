#pragma once

#include <span>
#include <vector>

namespace qcd {

/// Closed frequency interval, must lie inside [0, pi].
struct FrequencyBand {
    double lo = 0.0;
    double hi = 0.0;
};

void validate_band(const FrequencyBand& band);

/**
 * One-sided power spectrum of a mean-removed window on the Fourier grid
 * nu_j = 2*pi*j/d for j = 0..floor(d/2).
 *
 * Normalization: interior frequencies carry the usual one-sided doubling,
 * so summing `power` reproduces the two-sided total, which equals
 * d * (population variance of the mean-removed window).
 */
struct SpectrumEstimate {
    std::vector<double> frequencies;
    std::vector<double> power;
    std::size_t window_length = 0;
};

/// Mean-removed raw periodogram. Requires window length >= 4.
SpectrumEstimate periodogram(std::span<const double> window);

/// Sum of power over grid frequencies inside the band, endpoints inclusive.
double spectral_mass(const SpectrumEstimate& estimate, const FrequencyBand& band);

/// Full-band mass, i.e. the total power of the estimate.
double total_spectral_mass(const SpectrumEstimate& estimate);

} // namespace qcd
