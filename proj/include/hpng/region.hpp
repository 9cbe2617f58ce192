#pragma once

#include <cstddef>
#include <vector>

#include "hpng/geometry.hpp"
#include "hpng/plt.hpp"
#include "hpng/property.hpp"
#include "hpng/transient.hpp"

namespace hpng {

// Occupancy of a location over (RVs, t). Coordinates are the expired RVs in
// firing order, the pending RVs in model order and the time t last.
struct Region {
    HPolytope polytope;
    int location = -1;
    std::vector<RvId> vars;
    std::size_t expired = 0;
};

// Throws GeometryError when the region is empty.
Region location_to_region(const PLTree& tree, int node);

// Substitutes t = t' and drops the time coordinate.
HPolytope time_slice(const Region& region, double tPrime);

// Adds form >= 0 as a row -f.a x <= f.c.
void add_form(HPolytope& P, const LinearForm& f);

enum class GeometricMethod { Simplices, Polytopes };

// Transient probability from the regions: every candidate region is sliced at
// t', the property is intersected and the density integrated over Delaunay
// simplices or directly over the bounding box. Pending RVs clipped at tauMax
// get the tail mass of their distribution over the projection without them.
TransientResult geometric_transient(const PLTree& tree, double tPrime, const Property& prop,
                                    GeometricMethod method, const McConfig& cfg, unsigned threads = 1);

}  // namespace hpng
