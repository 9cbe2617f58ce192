#include "hpng/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "hpng/errors.hpp"

namespace hpng {

namespace {

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double Phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double std_normal_quantile(double p) {
    static const boost::math::normal_distribution<double> n(0.0, 1.0);
    return boost::math::quantile(n, p);
}

}  // namespace

DistributionSpec DistributionSpec::uniform(double a, double b) {
    DistributionSpec d;
    d.family = Family::Uniform;
    d.a = a;
    d.b = b;
    return d;
}

DistributionSpec DistributionSpec::normal(double mu, double sigma) {
    DistributionSpec d;
    d.family = Family::Normal;
    d.mu = mu;
    d.sigma = sigma;
    return d;
}

DistributionSpec DistributionSpec::folded_normal(double mu, double sigma) {
    DistributionSpec d;
    d.family = Family::FoldedNormal;
    d.mu = mu;
    d.sigma = sigma;
    return d;
}

DistributionSpec DistributionSpec::exponential(double lambda) {
    DistributionSpec d;
    d.family = Family::Exponential;
    d.lambda = lambda;
    return d;
}

std::string family_name(DistributionSpec::Family f) {
    switch (f) {
        case DistributionSpec::Family::Uniform: return "uniform";
        case DistributionSpec::Family::Normal: return "normal";
        case DistributionSpec::Family::FoldedNormal: return "foldedNormal";
        case DistributionSpec::Family::Exponential: return "exponential";
    }
    return "?";
}

double pdf(const DistributionSpec& d, double x) {
    if (x < 0.0) return 0.0;
    switch (d.family) {
        case DistributionSpec::Family::Uniform:
            return (x >= d.a && x <= d.b) ? 1.0 / (d.b - d.a) : 0.0;
        case DistributionSpec::Family::Normal: {
            const double mass = 1.0 - Phi(-d.mu / d.sigma);
            return phi((x - d.mu) / d.sigma) / d.sigma / mass;
        }
        case DistributionSpec::Family::FoldedNormal:
            return phi((x - d.mu) / d.sigma) / d.sigma + phi((x + d.mu) / d.sigma) / d.sigma;
        case DistributionSpec::Family::Exponential:
            return d.lambda * std::exp(-d.lambda * x);
    }
    return 0.0;
}

double cdf(const DistributionSpec& d, double x) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    switch (d.family) {
        case DistributionSpec::Family::Uniform:
            if (x <= d.a) return 0.0;
            if (x >= d.b) return 1.0;
            return (x - d.a) / (d.b - d.a);
        case DistributionSpec::Family::Normal: {
            const double p0 = Phi(-d.mu / d.sigma);
            return (Phi((x - d.mu) / d.sigma) - p0) / (1.0 - p0);
        }
        case DistributionSpec::Family::FoldedNormal:
            return Phi((x - d.mu) / d.sigma) - Phi((-x - d.mu) / d.sigma);
        case DistributionSpec::Family::Exponential:
            return -std::expm1(-d.lambda * x);
    }
    return 0.0;
}

double quantile(const DistributionSpec& d, double u) {
    if (!(u > 0.0 && u < 1.0)) {
        if (u <= 0.0) return d.family == DistributionSpec::Family::Uniform ? d.a : 0.0;
        return support_upper(d);
    }
    switch (d.family) {
        case DistributionSpec::Family::Uniform:
            return d.a + u * (d.b - d.a);
        case DistributionSpec::Family::Normal: {
            const double p0 = Phi(-d.mu / d.sigma);
            const double p = p0 + u * (1.0 - p0);
            return std::max(0.0, d.mu + d.sigma * std_normal_quantile(p));
        }
        case DistributionSpec::Family::FoldedNormal: {
            // cdf is increasing on [0, inf); bracket then bisect.
            double lo = 0.0, hi = std::abs(d.mu) + 10.0 * d.sigma;
            while (cdf(d, hi) < u) hi *= 2.0;
            for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                (cdf(d, mid) < u ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        case DistributionSpec::Family::Exponential:
            return -std::log1p(-u) / d.lambda;
    }
    return 0.0;
}

double support_upper(const DistributionSpec& d) {
    if (d.family == DistributionSpec::Family::Uniform) return d.b;
    return std::numeric_limits<double>::infinity();
}

}  // namespace hpng
