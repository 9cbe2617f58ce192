#pragma once

#include <string>

namespace hpng {

struct DistributionSpec {
    enum class Family { Uniform, Normal, FoldedNormal, Exponential };
    Family family = Family::Uniform;
    double a = 0.0, b = 1.0;        // uniform
    double mu = 0.0, sigma = 1.0;   // normal, folded normal
    double lambda = 1.0;            // exponential

    static DistributionSpec uniform(double a, double b);
    static DistributionSpec normal(double mu, double sigma);
    static DistributionSpec folded_normal(double mu, double sigma);
    static DistributionSpec exponential(double lambda);

    bool operator==(const DistributionSpec&) const = default;
};

std::string family_name(DistributionSpec::Family f);

// Densities live on [0, inf): the normal family is truncated at 0 and
// renormalized, the folded normal is |X|. Negative x gives 0.
double pdf(const DistributionSpec& d, double x);
double cdf(const DistributionSpec& d, double x);
double quantile(const DistributionSpec& d, double u);

// Upper end of the support, +inf when unbounded.
double support_upper(const DistributionSpec& d);

}  // namespace hpng
