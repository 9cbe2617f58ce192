#pragma once

namespace hpng {

// Process-wide numeric tolerances. Set them before building trees.
struct Tolerances {
    double eps = 1e-9;    // coefficient and bound comparisons
    double geom = 1e-7;   // containment and vertex dedup
    double vol = 1e-10;   // simplex degeneracy
};

Tolerances& tolerances();

inline double eps() { return tolerances().eps; }

}  // namespace hpng
