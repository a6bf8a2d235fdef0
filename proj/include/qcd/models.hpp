#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qcd/rng.hpp"

namespace qcd {

enum class Family { Bernoulli, Poisson, GaussianMean, Ar1Gaussian };

const char* family_name(Family family) noexcept;

/// Bernoulli parameters are clamped into [kBernoulliEps, 1 - kBernoulliEps]
/// so log likelihood ratios stay finite on any {0,1} input.
inline constexpr double kBernoulliEps = 1e-6;

/**
 * One-dimensional parametric density with a log-density, a sampler, and
 * maximum-likelihood support.
 *
 * Families:
 *  - Bernoulli(p), support {0, 1}
 *  - Poisson(rate), support nonnegative integers
 *  - GaussianMean(mean, variance), variance treated as known and fixed
 *  - Ar1Gaussian(coefficient, innovation variance), a conditional density:
 *    x_n | x_{n-1} ~ N(coefficient * x_{n-1}, variance), path started at 0
 */
class ParametricModel {
public:
    static ParametricModel bernoulli(double p);
    static ParametricModel poisson(double rate);
    static ParametricModel gaussian_mean(double mean, double variance);
    static ParametricModel ar1_gaussian(double coefficient, double innovation_variance);

    Family family() const noexcept { return family_; }
    bool iid() const noexcept { return family_ != Family::Ar1Gaussian; }

    /// p, rate, mean, or AR coefficient depending on the family.
    double primary_param() const noexcept { return a_; }
    /// Variance for the Gaussian families; unused otherwise.
    double variance_param() const noexcept { return b_; }

    /**
     * log f(x | history). The iid families ignore the history; Ar1Gaussian
     * conditions on the last history value (conditional mean 0 when the
     * history is empty). Throws std::domain_error for x outside the support.
     */
    double log_density(double x, std::span<const double> history = {}) const;

    bool operator==(const ParametricModel&) const = default;

private:
    ParametricModel(Family family, double a, double b) : family_(family), a_(a), b_(b) {}

    Family family_;
    double a_;
    double b_;
};

/// log f1(x|history) - log f0(x|history). Families must match.
double log_likelihood_ratio(const ParametricModel& f0, const ParametricModel& f1,
                            double x, std::span<const double> history = {});

/// Closed-form D(f || g) for the iid families; >= 0, zero iff equal
/// parameters (after Bernoulli clamping). Ar1Gaussian is unsupported.
double kl_divergence(const ParametricModel& f, const ParametricModel& g);

/// Closed interval of admissible values for the scalar family parameter.
struct ParameterSet {
    double lower = 0.0;
    double upper = 0.0;
};

bool disjoint(const ParameterSet& a, const ParameterSet& b) noexcept;

/// Throws std::invalid_argument if the interval is empty or leaves the
/// family's valid parameter range.
void validate_parameter_set(Family family, const ParameterSet& set);

/**
 * Constrained MLE of the scalar parameter over `constraint`. For the iid
 * exponential families the likelihood is unimodal in the mean parameter,
 * so this is the sample mean projected onto [lower, upper].
 */
double mle(Family family, std::span<const double> samples, const ParameterSet& constraint);

/// True if x lies in the family's support.
bool in_support(Family family, double x) noexcept;

/// n draws, deterministic per seed. Ar1Gaussian produces a path started at 0.
std::vector<double> sample(const ParametricModel& model, std::size_t n, std::uint64_t seed);

/// Sampler variant reusing a caller-owned stream (one stream per Monte Carlo run).
void sample_into(const ParametricModel& model, std::size_t n, SplitMix64& rng,
                 std::vector<double>& out);

} // namespace qcd
