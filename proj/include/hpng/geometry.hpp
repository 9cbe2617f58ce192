#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hpng/config.hpp"
#include "hpng/montecarlo.hpp"

namespace hpng {

// {x | A x <= b}.
struct HPolytope {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    HPolytope() = default;
    explicit HPolytope(int dim) : A(0, dim), b(0) {}

    int dim() const { return int(A.cols()); }
    int rows() const { return int(A.rows()); }
    void add_row(const Eigen::VectorXd& a, double rhs);
    // Unit-norm rows, zero rows dropped (or kept as 0 <= -1 when violated),
    // parallel duplicates merged to the tightest.
    void canonicalize();
};

bool contains(const HPolytope& P, const Eigen::VectorXd& x, double tol = tolerances().geom);

// Vertices by double description on the homogenized cone. Empty for an empty
// polytope; throws GeometryError when P is unbounded.
std::vector<Eigen::VectorXd> vertex_enumeration(const HPolytope& P);

// Facets of the hull of full-dimensional points (same kernel, dual cone).
HPolytope convex_hull(const std::vector<Eigen::VectorXd>& points);

// Fourier-Motzkin elimination of one coordinate.
HPolytope project_out(const HPolytope& P, int coordinate);

struct Simplex {
    std::vector<Eigen::VectorXd> vertices;  // d + 1 points in R^d
};

// Delaunay cells of the points (lifting map, lower hull), cells with more than
// d + 1 points refined by cone triangulation. Index lists into `points`.
std::vector<std::vector<int>> triangulate_points(const std::vector<Eigen::VectorXd>& points);

// Simplicial partition of P; empty when P is empty or not full-dimensional.
std::vector<Simplex> triangulate(const HPolytope& P);

struct AffineMap {
    Eigen::MatrixXd A;  // columns v_i - v_0
    Eigen::VectorXd v0;
    double det = 0.0;
    double absDet = 0.0;
};

// Throws GeometryError when |det A| <= vol tolerance.
AffineMap simplex_affine_map(const Simplex& s);
double simplex_volume(const Simplex& s);

using Density = std::function<double(std::span<const double>)>;

// Integral of the density over the simplex. Sorted sampling draws uniform
// points of the unit simplex directly; otherwise the unit cube is sampled
// with the simplex indicator through the configured engine.
Estimate probability_over_simplex(const Simplex& s, const Density& density, const McConfig& cfg,
                                  std::uint64_t stream, bool sortedSampling = true);

// Per-dimension [min, max] over the vertices; empty for an empty polytope.
IntervalBox bounding_box(const HPolytope& P);

// Indicator times density over the bounding box.
Estimate probability_over_region_direct(const HPolytope& P, const Density& density, const McConfig& cfg,
                                        std::uint64_t stream);

double volume(const HPolytope& P);

// Non-empty with affinely independent vertices spanning all coordinates.
bool full_dimensional(const HPolytope& P);

}  // namespace hpng
