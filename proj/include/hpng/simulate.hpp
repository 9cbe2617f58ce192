#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hpng/model.hpp"
#include "hpng/plt.hpp"
#include "hpng/property.hpp"
#include "hpng/rng.hpp"
#include "hpng/semantics.hpp"

namespace hpng {

using Assignment = std::map<RvId, double>;

struct TraceEntry {
    double time = 0.0;
    EventKind kind = EventKind::Deterministic;
    int element = -1;  // as in Event
    std::vector<int> marking;
    std::vector<double> levels;
};

struct Trajectory {
    std::vector<TraceEntry> trace;
    Assignment values;          // every RV that became pending
    std::vector<RvId> order;    // firing order
    std::vector<int> marking;   // at the horizon
    std::vector<double> levels;
};

inline constexpr std::size_t kDefaultEventCap = 100000;

// Concrete run up to `horizon`. RVs missing from `values` are drawn from
// `rng`; with no rng they must all be given (ConfigError otherwise). Throws
// RunawayError after maxEvents events.
Trajectory simulate_run(const Model& m, double horizon, Assignment values, CounterRng* rng,
                        std::size_t maxEvents = kDefaultEventCap);

// time,kind,element rows with a header line.
std::string trace_csv(const Model& m, const Trajectory& run);

// Root-to-leaf node sequence whose domains contain the assignment. When a trace
// is given, children are also matched against the fired events.
std::vector<int> plt_path(const PLTree& tree, const Assignment& values,
                          const std::vector<TraceEntry>* trace = nullptr);

struct SimConfig {
    std::uint64_t seed = 1;
    double confidence = 0.99;
    double halfWidth = 0.001;
    std::size_t minRuns = 100;
    std::size_t maxRuns = 50000000;
    std::size_t batch = 20000;
    std::size_t maxEvents = kDefaultEventCap;
};

struct SimEstimate {
    double p = 0.0;
    double halfWidth = 0.0;
    std::size_t runs = 0;
    double wallTimeMs = 0.0;
};

// Sequential estimate of P(prop holds at t') with a normal-approximation
// confidence interval. Run r draws from stream (seed, r).
SimEstimate estimate_probability(const Model& m, double tPrime, const Property& prop, const SimConfig& cfg,
                                 unsigned threads = 1);

}  // namespace hpng
