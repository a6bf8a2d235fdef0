#include "qcd/spectral.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qcd {

void validate_band(const FrequencyBand& band) {
    if (!(band.lo <= band.hi)) {
        throw std::invalid_argument("frequency band is empty (lo > hi)");
    }
    if (band.lo < 0.0 || band.hi > std::numbers::pi) {
        throw std::invalid_argument("frequency band must lie inside [0, pi]");
    }
}

SpectrumEstimate periodogram(std::span<const double> window) {
    const std::size_t d = window.size();
    if (d < 4) {
        throw std::invalid_argument("periodogram requires a window of length >= 4");
    }

    const double mean =
        std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(d);

    SpectrumEstimate est;
    est.window_length = d;
    const std::size_t half = d / 2;
    est.frequencies.reserve(half + 1);
    est.power.reserve(half + 1);

    // Direct DFT of the mean-removed window; windows are short enough that
    // the O(d^2) cost is irrelevant next to the Monte Carlo loops above it.
    const double step = 2.0 * std::numbers::pi / static_cast<double>(d);
    for (std::size_t j = 0; j <= half; ++j) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            const double angle = step * static_cast<double>(j) * static_cast<double>(t);
            const double x = window[t] - mean;
            re += x * std::cos(angle);
            im -= x * std::sin(angle);
        }
        double p = (re * re + im * im) / static_cast<double>(d);
        const bool nyquist = d % 2 == 0 && j == half;
        if (j != 0 && !nyquist) p *= 2.0; // one-sided doubling
        // The Nyquist bin is exactly pi; rounding of step*j must not push it
        // outside a [lo, pi] band.
        est.frequencies.push_back(nyquist ? std::numbers::pi : step * static_cast<double>(j));
        est.power.push_back(p);
    }
    return est;
}

double spectral_mass(const SpectrumEstimate& estimate, const FrequencyBand& band) {
    validate_band(band);
    double mass = 0.0;
    for (std::size_t j = 0; j < estimate.frequencies.size(); ++j) {
        if (estimate.frequencies[j] >= band.lo && estimate.frequencies[j] <= band.hi) {
            mass += estimate.power[j];
        }
    }
    return mass;
}

double total_spectral_mass(const SpectrumEstimate& estimate) {
    return std::accumulate(estimate.power.begin(), estimate.power.end(), 0.0);
}

} // namespace qcd
