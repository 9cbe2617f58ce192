#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hpng/distribution.hpp"
#include "hpng/montecarlo.hpp"
#include "hpng/rng.hpp"

using namespace hpng;

TEST(Rng, PhiloxKnownAnswer) {
    const auto r = CounterRng::philox({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(r[0], 0x6627e8d5u);
    EXPECT_EQ(r[1], 0xe169c58du);
    EXPECT_EQ(r[2], 0xbc57ac4cu);
    EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Rng, StreamsReproduceAndDiffer) {
    CounterRng a(42, 3), b(42, 3), c(42, 4);
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        EXPECT_NE(x, c.uniform());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(Rng, UniformMoments) {
    CounterRng r(1, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform_open();
        ASSERT_GT(u, 0.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 0.005);
    EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 0.002);
}

TEST(Integrate, Polynomial) {
    // Integral of x*y over [0,2]x[0,3] = 9.
    Integrand f = [](std::span<const double> x) { return x[0] * x[1]; };
    McConfig cfg;
    cfg.samples = 50000;
    for (bool adaptive : {false, true}) {
        cfg.adaptive = adaptive;
        const Estimate e = integrate(f, {{0.0, 2.0}, {0.0, 3.0}}, cfg, 5);
        EXPECT_NEAR(e.value, 9.0, 5 * e.sigma + 1e-9) << "adaptive " << adaptive;
        EXPECT_GT(e.sigma, 0.0);
    }
}

TEST(Integrate, ConstantHasZeroError) {
    Integrand f = [](std::span<const double>) { return 2.0; };
    McConfig cfg;
    cfg.samples = 1000;
    for (bool adaptive : {false, true}) {
        cfg.adaptive = adaptive;
        const Estimate e = integrate(f, {{0.0, 1.0}, {0.0, 0.5}}, cfg);
        EXPECT_NEAR(e.value, 1.0, 1e-12);
        EXPECT_NEAR(e.sigma, 0.0, 1e-9);  // sqrt of a rounding-level variance
    }
}

TEST(Integrate, VegasBeatsPlainOnPeak) {
    const double w = 0.05;
    Integrand f = [w](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += (v - 0.5) * (v - 0.5);
        return std::exp(-r2 / (2 * w * w)) / std::pow(2 * std::numbers::pi * w * w, 1.5);
    };
    McConfig cfg;
    cfg.samples = 20000;
    cfg.iterations = 6;
    const IntervalBox box(3, {0.0, 1.0});
    cfg.adaptive = false;
    const Estimate plain = integrate(f, box, cfg, 1);
    cfg.adaptive = true;
    const Estimate vegas = integrate(f, box, cfg, 1);
    EXPECT_NEAR(vegas.value, 1.0, 5 * vegas.sigma + 1e-3);
    EXPECT_LT(vegas.sigma, plain.sigma);
}

TEST(Integrate, FixedSeedIsBitIdentical) {
    Integrand f = [](std::span<const double> x) { return std::sin(x[0]) * std::cos(x[1]); };
    McConfig cfg;
    cfg.samples = 5000;
    const Estimate a = integrate(f, {{0.0, 1.0}, {0.0, 1.0}}, cfg, 9);
    const Estimate b = integrate(f, {{0.0, 1.0}, {0.0, 1.0}}, cfg, 9);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.sigma, b.sigma);
}

TEST(Integrate, NonFiniteSamplesSkipped) {
    Integrand f = [](std::span<const double> x) { return x[0] < 0.5 ? std::nan("") : 1.0; };
    McConfig cfg;
    cfg.samples = 1000;
    cfg.adaptive = false;
    const Estimate e = integrate(f, {{0.0, 1.0}}, cfg);
    EXPECT_GT(e.skipped, 0u);
    EXPECT_TRUE(std::isfinite(e.value));
}

TEST(CombineIterations, InverseVarianceWeights) {
    const Estimate c = combine_iterations({{1.0, 1.0, 10, 0}, {3.0, 1.0, 10, 0}});
    EXPECT_NEAR(c.value, 2.0, 1e-12);
    EXPECT_NEAR(c.sigma, std::sqrt(0.5), 1e-12);
}

TEST(EstimateSum, Independent) {
    Estimate a{1.0, 3.0, 1, 0};
    a += Estimate{2.0, 4.0, 1, 0};
    EXPECT_DOUBLE_EQ(a.value, 3.0);
    EXPECT_DOUBLE_EQ(a.sigma, 5.0);
    const Estimate s = 2.0 * a;
    EXPECT_DOUBLE_EQ(s.sigma, 10.0);
}

namespace {

double simpson(const DistributionSpec& d, double lo, double hi, int n = 20000) {
    const double h = (hi - lo) / n;
    double s = pdf(d, lo) + pdf(d, hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(d, lo + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST(Distribution, DensitiesIntegrateToOne) {
    const DistributionSpec fams[] = {DistributionSpec::uniform(6, 10), DistributionSpec::normal(8, 1),
                                     DistributionSpec::normal(1, 2), DistributionSpec::folded_normal(7, 2),
                                     DistributionSpec::exponential(0.5)};
    for (const auto& d : fams) {
        const bool bounded = std::isfinite(support_upper(d));
        const double lo = d.family == DistributionSpec::Family::Uniform ? d.a : 0.0;
        EXPECT_NEAR(simpson(d, lo, bounded ? support_upper(d) : 200.0), 1.0, 1e-6) << family_name(d.family);
        EXPECT_EQ(pdf(d, -1.0), 0.0);
    }
}

TEST(Distribution, FoldedNormalClosedFormCdf) {
    // F(x) = (erf((x + mu) / (sigma sqrt2)) + erf((x - mu) / (sigma sqrt2))) / 2.
    const DistributionSpec d = DistributionSpec::folded_normal(14, 4);
    for (double x : {0.5, 3.0, 7.5, 10.0, 14.0, 25.0}) {
        const double closed = 0.5 * (std::erf((x + 14) / (4 * std::sqrt(2.0))) + std::erf((x - 14) / (4 * std::sqrt(2.0))));
        EXPECT_NEAR(cdf(d, x), closed, 1e-12);
        EXPECT_NEAR(simpson(d, 0.0, x), closed, 1e-8);
    }
}

TEST(Distribution, TruncatedNormalRenormalized) {
    const DistributionSpec d = DistributionSpec::normal(1, 2);
    const double z0 = 0.5 * std::erfc(-0.5 / std::sqrt(2.0));  // P(N(1,4) > 0)
    const double x = 2.0;
    const double phi = std::exp(-0.125) / (2 * std::sqrt(2 * std::numbers::pi));
    EXPECT_NEAR(pdf(d, x), phi / z0, 1e-12);
    EXPECT_NEAR(cdf(d, 0.0), 0.0, 1e-15);
}

TEST(Distribution, QuantileInvertsCdf) {
    const DistributionSpec fams[] = {DistributionSpec::uniform(0, 10), DistributionSpec::normal(8, 1),
                                     DistributionSpec::folded_normal(7, 2), DistributionSpec::exponential(2)};
    for (const auto& d : fams)
        for (double u : {0.01, 0.3, 0.5, 0.9, 0.999}) EXPECT_NEAR(cdf(d, quantile(d, u)), u, 1e-9);
}

TEST(Distribution, Uniform) {
    const auto d = DistributionSpec::uniform(6, 10);
    EXPECT_DOUBLE_EQ(cdf(d, 8), 0.5);
    EXPECT_DOUBLE_EQ(pdf(d, 7), 0.25);
    EXPECT_DOUBLE_EQ(support_upper(d), 10.0);
    EXPECT_TRUE(std::isinf(support_upper(DistributionSpec::exponential(1))));
}
