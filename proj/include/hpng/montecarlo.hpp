#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hpng/rng.hpp"

namespace hpng {

struct McConfig {
    std::size_t samples = 100000;  // per iteration
    int iterations = 5;
    std::uint64_t seed = 1;
    bool adaptive = true;          // VEGAS
    int gridBins = 64;
};

struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
    std::size_t evaluations = 0;
    std::size_t skipped = 0;  // non-finite samples

    Estimate& operator+=(const Estimate& o);  // independent estimators
};

Estimate operator*(double s, Estimate e);

using Integrand = std::function<double(std::span<const double>)>;
using IntervalBox = std::vector<std::pair<double, double>>;

// Plain Monte Carlo over a finite box.
Estimate mc_integrate(const Integrand& f, const IntervalBox& box, const McConfig& cfg,
                      std::uint64_t stream = 0);

// VEGAS: separable importance sampling on a per-axis grid refined each iteration.
Estimate vegas_integrate(const Integrand& f, const IntervalBox& box, const McConfig& cfg,
                         std::uint64_t stream = 0);

// Dispatches on cfg.adaptive.
Estimate integrate(const Integrand& f, const IntervalBox& box, const McConfig& cfg,
                   std::uint64_t stream = 0);

// Inverse-variance weighted combination of iteration estimates.
Estimate combine_iterations(const std::vector<Estimate>& its);

}  // namespace hpng
