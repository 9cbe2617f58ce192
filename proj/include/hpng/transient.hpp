#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hpng/constraints.hpp"
#include "hpng/distribution.hpp"
#include "hpng/montecarlo.hpp"
#include "hpng/plt.hpp"
#include "hpng/property.hpp"

namespace hpng {

// Occupancy set at t' as triangular pieces over `vars`: expired RVs in firing
// order, then pending RVs in model order.
struct RestrictedDomain {
    std::vector<Piece> pieces;
    std::vector<RvId> vars;
    std::size_t expired = 0;
    bool empty() const { return pieces.empty(); }
};

// Locations with min entry <= t' <= max exit whose occupancy set at t' has
// positive measure. Throws RangeError when t' is outside [0, tauMax].
std::vector<int> candidates(const PLTree& tree, double tPrime);

// The entry/exit interval test alone, without the measure check.
std::vector<int> interval_candidates(const PLTree& tree, double tPrime);

// Continuous atoms of `prop` at t' as forms >= 0 over the expired RVs; nullopt
// when an equality atom makes the set measure zero.
std::optional<std::vector<LinearForm>> level_constraints(const ParametricLocation& loc, double tPrime,
                                                         const Property& prop);

RestrictedDomain restrict_domain(const PLTree& tree, int node, double tPrime,
                                 const Property* prop = nullptr);

double accumulated_conflict_probability(const PLTree& tree, int node);

std::vector<DistributionSpec> densities(const Model& m, const std::vector<RvId>& vars);

// Integral of the joint density over the piece mapped onto [-1, 1]^n, with
// unbounded upper bounds replaced by tauMax.
Estimate integrate_bounded_piece(const Piece& piece, const std::vector<DistributionSpec>& dists,
                                 double tauMax, const McConfig& cfg, std::uint64_t stream);

// Full integral over a piece whose pending variables may be unbounded: the
// tauMax-clipped integral plus, per unbounded variable, the mass beyond tauMax
// times the integral with that variable removed (recursively).
Estimate truncation_correction(const Piece& piece, const std::vector<DistributionSpec>& dists,
                               double tauMax, const McConfig& cfg, std::uint64_t stream);

struct LocationResult {
    int id = 0;
    double prob = 0.0;
    double error = 0.0;
    std::size_t pieces = 0;
};

struct TransientResult {
    double tPrime = 0.0;
    std::string method;
    double total = 0.0;
    double error = 0.0;
    std::vector<LocationResult> perLocation;
    std::size_t dimension = 0;  // RVs + time, over occupied candidates
    double wallTimeMs = 0.0;
};

TransientResult transient_probability(const PLTree& tree, double tPrime, const Property& prop,
                                      const McConfig& cfg, unsigned threads = 1);

// Deterministic per-task stream id.
std::uint64_t task_stream(int node, std::size_t piece, std::size_t term);

}  // namespace hpng
