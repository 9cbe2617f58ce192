#pragma once

#include <string>

#include "hpng/montecarlo.hpp"
#include "hpng/plt.hpp"
#include "hpng/property.hpp"
#include "hpng/simulate.hpp"
#include "hpng/transient.hpp"

namespace hpng {

enum class Method { Intervals, Simplices, Polytopes };

std::string method_name(Method m);
Method parse_method(const std::string& s);  // throws ConfigError

TransientResult analyze(const PLTree& tree, double tPrime, const Property& prop, Method method,
                        const McConfig& cfg, unsigned threads = 1);

// {tPrime, method, total, error, dimension, perLocation, wallTimeMs}.
std::string result_json(const TransientResult& r, bool withTiming = true);
std::string simulation_json(const SimEstimate& e, double tPrime, const Property& prop, bool withTiming = true);

}  // namespace hpng
