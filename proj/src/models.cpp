#include "qcd/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qcd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
    return v;
}

double gaussian_log_pdf(double x, double mean, double variance) {
    const double d = x - mean;
    return -0.5 * std::log(kTwoPi * variance) - d * d / (2.0 * variance);
}

// Exact Poisson draw via Knuth's product method, chunked through the
// additivity Poisson(a+b) = Poisson(a) + Poisson(b) so exp(-rate) never
// underflows for large rates.
double poisson_draw(SplitMix64& rng, double rate) {
    double count = 0.0;
    while (rate > 0.0) {
        const double chunk = std::min(rate, 30.0);
        rate -= chunk;
        const double limit = std::exp(-chunk);
        double prod = rng.next_double();
        while (prod > limit) {
            count += 1.0;
            prod *= rng.next_double();
        }
    }
    return count;
}

} // namespace

const char* family_name(Family family) noexcept {
    switch (family) {
        case Family::Bernoulli: return "bernoulli";
        case Family::Poisson: return "poisson";
        case Family::GaussianMean: return "gaussian";
        case Family::Ar1Gaussian: return "ar1";
    }
    return "unknown";
}

ParametricModel ParametricModel::bernoulli(double p) {
    require_finite(p, "bernoulli p");
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("bernoulli p must lie in [0, 1]");
    }
    return {Family::Bernoulli, std::clamp(p, kBernoulliEps, 1.0 - kBernoulliEps), 0.0};
}

ParametricModel ParametricModel::poisson(double rate) {
    require_finite(rate, "poisson rate");
    if (rate <= 0.0) {
        throw std::invalid_argument("poisson rate must be positive");
    }
    return {Family::Poisson, rate, 0.0};
}

ParametricModel ParametricModel::gaussian_mean(double mean, double variance) {
    require_finite(mean, "gaussian mean");
    require_finite(variance, "gaussian variance");
    if (variance <= 0.0) {
        throw std::invalid_argument("gaussian variance must be positive");
    }
    return {Family::GaussianMean, mean, variance};
}

ParametricModel ParametricModel::ar1_gaussian(double coefficient, double innovation_variance) {
    require_finite(coefficient, "ar1 coefficient");
    require_finite(innovation_variance, "ar1 innovation variance");
    if (std::abs(coefficient) >= 1.0) {
        throw std::invalid_argument("ar1 coefficient must satisfy |a| < 1");
    }
    if (innovation_variance <= 0.0) {
        throw std::invalid_argument("ar1 innovation variance must be positive");
    }
    return {Family::Ar1Gaussian, coefficient, innovation_variance};
}

bool in_support(Family family, double x) noexcept {
    if (!std::isfinite(x)) return false;
    switch (family) {
        case Family::Bernoulli:
            return x == 0.0 || x == 1.0;
        case Family::Poisson:
            return x >= 0.0 && std::floor(x) == x;
        case Family::GaussianMean:
        case Family::Ar1Gaussian:
            return true;
    }
    return false;
}

double ParametricModel::log_density(double x, std::span<const double> history) const {
    if (!in_support(family_, x)) {
        throw std::domain_error(std::string("value outside ") + family_name(family_) + " support");
    }
    switch (family_) {
        case Family::Bernoulli:
            return x == 1.0 ? std::log(a_) : std::log(1.0 - a_);
        case Family::Poisson:
            return -a_ + x * std::log(a_) - std::lgamma(x + 1.0);
        case Family::GaussianMean:
            return gaussian_log_pdf(x, a_, b_);
        case Family::Ar1Gaussian: {
            const double prev = history.empty() ? 0.0 : history.back();
            return gaussian_log_pdf(x, a_ * prev, b_);
        }
    }
    throw std::logic_error("unreachable family");
}

double log_likelihood_ratio(const ParametricModel& f0, const ParametricModel& f1,
                            double x, std::span<const double> history) {
    if (f0.family() != f1.family()) {
        throw std::invalid_argument("log_likelihood_ratio requires models of the same family");
    }
    return f1.log_density(x, history) - f0.log_density(x, history);
}

double kl_divergence(const ParametricModel& f, const ParametricModel& g) {
    if (f.family() != g.family()) {
        throw std::invalid_argument("kl_divergence requires models of the same family");
    }
    switch (f.family()) {
        case Family::Bernoulli: {
            const double p = f.primary_param();
            const double q = g.primary_param();
            return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
        }
        case Family::Poisson: {
            const double lf = f.primary_param();
            const double lg = g.primary_param();
            return lf * std::log(lf / lg) + lg - lf;
        }
        case Family::GaussianMean: {
            const double vf = f.variance_param();
            const double vg = g.variance_param();
            const double d = f.primary_param() - g.primary_param();
            return 0.5 * (std::log(vg / vf) + (vf + d * d) / vg - 1.0);
        }
        case Family::Ar1Gaussian:
            throw std::invalid_argument("kl_divergence is unsupported for ar1");
    }
    throw std::logic_error("unreachable family");
}

bool disjoint(const ParameterSet& a, const ParameterSet& b) noexcept {
    return a.upper < b.lower || b.upper < a.lower;
}

void validate_parameter_set(Family family, const ParameterSet& set) {
    require_finite(set.lower, "parameter set lower");
    require_finite(set.upper, "parameter set upper");
    if (set.lower > set.upper) {
        throw std::invalid_argument("parameter set lower must not exceed upper");
    }
    switch (family) {
        case Family::Bernoulli:
            if (set.lower < 0.0 || set.upper > 1.0) {
                throw std::invalid_argument("bernoulli parameter set must lie in [0, 1]");
            }
            break;
        case Family::Poisson:
            if (set.lower <= 0.0) {
                throw std::invalid_argument("poisson parameter set must be positive");
            }
            break;
        case Family::GaussianMean:
            break;
        case Family::Ar1Gaussian:
            if (set.lower <= -1.0 || set.upper >= 1.0) {
                throw std::invalid_argument("ar1 parameter set must lie inside (-1, 1)");
            }
            break;
    }
}

double mle(Family family, std::span<const double> samples, const ParameterSet& constraint) {
    if (samples.empty()) {
        throw std::invalid_argument("mle requires at least one sample");
    }
    validate_parameter_set(family, constraint);
    if (family == Family::Ar1Gaussian) {
        throw std::invalid_argument("mle is implemented for the iid exponential families only");
    }
    for (double x : samples) {
        if (!in_support(family, x)) {
            throw std::domain_error("mle sample outside family support");
        }
    }
    const double mean =
        std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    return std::clamp(mean, constraint.lower, constraint.upper);
}

void sample_into(const ParametricModel& model, std::size_t n, SplitMix64& rng,
                 std::vector<double>& out) {
    out.clear();
    out.reserve(n);
    switch (model.family()) {
        case Family::Bernoulli: {
            const double p = model.primary_param();
            for (std::size_t i = 0; i < n; ++i) {
                out.push_back(rng.next_double() < p ? 1.0 : 0.0);
            }
            break;
        }
        case Family::Poisson: {
            const double rate = model.primary_param();
            for (std::size_t i = 0; i < n; ++i) {
                out.push_back(poisson_draw(rng, rate));
            }
            break;
        }
        case Family::GaussianMean: {
            const double mean = model.primary_param();
            const double sd = std::sqrt(model.variance_param());
            for (std::size_t i = 0; i < n; ++i) {
                out.push_back(mean + sd * rng.next_gaussian());
            }
            break;
        }
        case Family::Ar1Gaussian: {
            const double a = model.primary_param();
            const double sd = std::sqrt(model.variance_param());
            double prev = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                prev = a * prev + sd * rng.next_gaussian();
                out.push_back(prev);
            }
            break;
        }
    }
}

std::vector<double> sample(const ParametricModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample requires n >= 1");
    }
    SplitMix64 rng(seed);
    std::vector<double> out;
    sample_into(model, n, rng, out);
    return out;
}

} // namespace qcd
