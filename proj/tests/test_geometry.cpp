#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hpng/errors.hpp"
#include "hpng/geometry.hpp"
#include "hpng/region.hpp"
#include "test_support.hpp"

using namespace hpng;
using Eigen::VectorXd;

namespace {

HPolytope box(int d, double lo, double hi) {
    HPolytope P(d);
    for (int k = 0; k < d; ++k) {
        VectorXd a = VectorXd::Zero(d);
        a[k] = 1;
        P.add_row(a, hi);
        P.add_row(-a, -lo);
    }
    return P;
}

// Unit cube cut by random halfspaces through points near the center.
HPolytope random_polytope(std::mt19937_64& gen, int d, int cuts) {
    HPolytope P = box(d, 0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> off(0.05, 0.4);
    for (int c = 0; c < cuts; ++c) {
        VectorXd a(d);
        for (int k = 0; k < d; ++k) a[k] = n(gen);
        a.normalize();
        P.add_row(a, a.dot(VectorXd::Constant(d, 0.5)) + off(gen));
    }
    return P;
}

std::vector<VectorXd> brute_force_vertices(const HPolytope& P) {
    const int d = P.dim(), m = P.rows();
    std::vector<VectorXd> out;
    std::vector<int> idx(d);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == d) {
            Eigen::MatrixXd A(d, d);
            VectorXd b(d);
            for (int i = 0; i < d; ++i) {
                A.row(i) = P.A.row(idx[i]);
                b[i] = P.b[idx[i]];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (lu.rank() < d) return;
            const VectorXd x = lu.solve(b);
            if (!contains(P, x, 1e-9)) return;
            for (const auto& v : out)
                if ((v - x).norm() < 1e-7) return;
            out.push_back(x);
            return;
        }
        for (int i = start; i < m; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return out;
}

double cayley_menger_volume(const Simplex& s) {
    const int n = int(s.vertices.size()) - 1;
    Eigen::MatrixXd cm = Eigen::MatrixXd::Ones(n + 2, n + 2);
    cm(0, 0) = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) cm(i + 1, j + 1) = (s.vertices[i] - s.vertices[j]).squaredNorm();
    double fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double v2 = std::pow(-1.0, n + 1) * cm.determinant() / (std::pow(2.0, n) * fact * fact);
    return std::sqrt(std::max(v2, 0.0));
}

}  // namespace

TEST(HPolytope, CanonicalizeMergesParallelRows) {
    HPolytope P(2);
    P.add_row(VectorXd::Unit(2, 0) * 2, 4);  // x <= 2
    P.add_row(VectorXd::Unit(2, 0), 3);      // x <= 3
    P.add_row(VectorXd::Zero(2), 1);         // 0 <= 1
    P.canonicalize();
    ASSERT_EQ(P.rows(), 1);
    EXPECT_NEAR(P.b[0], 2.0, 1e-12);
}

TEST(Vertices, CubeAndSimplex) {
    EXPECT_EQ(vertex_enumeration(box(3, 0, 1)).size(), 8u);
    HPolytope S = box(3, 0, 10);
    S.add_row(VectorXd::Ones(3), 1);
    EXPECT_EQ(vertex_enumeration(S).size(), 4u);
}

TEST(Vertices, MatchBruteForce) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + trial % 3;
        const HPolytope P = random_polytope(gen, d, 4);
        const auto dd = vertex_enumeration(P);
        const auto bf = brute_force_vertices(P);
        ASSERT_EQ(dd.size(), bf.size()) << "trial " << trial;
        for (const auto& v : bf) {
            double best = 1e9;
            for (const auto& w : dd) best = std::min(best, (v - w).norm());
            EXPECT_LT(best, 1e-7);
        }
    }
}

TEST(Vertices, EmptyAndUnbounded) {
    HPolytope E = box(2, 0, 1);
    E.add_row(VectorXd::Ones(2), -1);
    EXPECT_TRUE(vertex_enumeration(E).empty());
    HPolytope U(2);
    U.add_row(-VectorXd::Unit(2, 0), 0);
    U.add_row(-VectorXd::Unit(2, 1), 0);
    EXPECT_THROW(vertex_enumeration(U), GeometryError);
}

TEST(ConvexHull, RoundTripContainment) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-0.2, 1.2);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 2 + trial % 3;
        const HPolytope P = random_polytope(gen, d, 3);
        const HPolytope Q = convex_hull(vertex_enumeration(P));
        for (int s = 0; s < 500; ++s) {
            VectorXd x(d);
            for (int k = 0; k < d; ++k) x[k] = u(gen);
            const bool inP = contains(P, x, 0.0), inQ = contains(Q, x, 0.0);
            if (inP != inQ) {
                EXPECT_TRUE(contains(P, x, 1e-7) && contains(Q, x, 1e-7)) << "trial " << trial;
            }
        }
    }
}

TEST(ProjectOut, Triangle) {
    // 0 <= y <= x <= 1 projected onto x gives [0, 1].
    HPolytope P(2);
    P.add_row(-VectorXd::Unit(2, 1), 0);
    P.add_row((VectorXd(2) << -1, 1).finished(), 0);
    P.add_row(VectorXd::Unit(2, 0), 1);
    const HPolytope Q = project_out(P, 1);
    ASSERT_EQ(Q.dim(), 1);
    const auto v = vertex_enumeration(Q);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(std::min(v[0][0], v[1][0]), 0.0, 1e-12);
    EXPECT_NEAR(std::max(v[0][0], v[1][0]), 1.0, 1e-12);
}

TEST(Triangulate, VolumesAddUp) {
    EXPECT_NEAR(volume(box(3, 0, 2)), 8.0, 1e-9);
    EXPECT_NEAR(volume(box(4, 0, 1)), 1.0, 1e-9);
    HPolytope S = box(2, 0, 10);
    S.add_row(VectorXd::Ones(2), 1);
    EXPECT_NEAR(volume(S), 0.5, 1e-12);
}

TEST(Triangulate, SimplicesCoverWithoutOverlap) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const HPolytope P = random_polytope(gen, 3, 4);
    const auto simplices = triangulate(P);
    ASSERT_FALSE(simplices.empty());
    int inside = 0, covered = 0;
    for (int s = 0; s < 3000; ++s) {
        const VectorXd x = (VectorXd(3) << u(gen), u(gen), u(gen)).finished();
        if (!contains(P, x, 0.0)) continue;
        ++inside;
        int hits = 0;
        for (const auto& sx : simplices) {
            const AffineMap map = simplex_affine_map(sx);
            const VectorXd l = map.A.lu().solve(x - map.v0);
            if (l.minCoeff() >= -1e-9 && l.sum() <= 1 + 1e-9) ++hits;
        }
        if (hits == 1) ++covered;
    }
    EXPECT_EQ(covered, inside);
}

TEST(Simplex, DeterminantMatchesCayleyMenger) {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + trial % 4;
        Simplex s;
        for (int i = 0; i <= d; ++i) {
            VectorXd v(d);
            for (int k = 0; k < d; ++k) v[k] = n(gen);
            s.vertices.push_back(v);
        }
        EXPECT_NEAR(simplex_volume(s), cayley_menger_volume(s), 1e-8);
        double fact = 1;
        for (int k = 2; k <= d; ++k) fact *= k;
        EXPECT_NEAR(simplex_affine_map(s).absDet, fact * simplex_volume(s), 1e-8);
    }
}

TEST(Simplex, DegenerateThrows) {
    Simplex s{{VectorXd::Zero(2), VectorXd::Ones(2), 2 * VectorXd::Ones(2)}};
    EXPECT_THROW(simplex_affine_map(s), GeometryError);
}

TEST(Simplex, ProbabilityOfLinearDensity) {
    // Integral of x over the unit triangle is 1/6.
    Simplex s{{VectorXd::Zero(2), VectorXd::Unit(2, 0), VectorXd::Unit(2, 1)}};
    Density f = [](std::span<const double> x) { return x[0]; };
    McConfig cfg;
    cfg.samples = 40000;
    for (bool sorted : {true, false}) {
        const Estimate e = probability_over_simplex(s, f, cfg, 3, sorted);
        EXPECT_NEAR(e.value, 1.0 / 6, 5 * e.sigma + 1e-4) << "sorted " << sorted;
    }
}

TEST(Region, DirectMatchesVolume) {
    HPolytope S = box(2, 0, 10);
    S.add_row(VectorXd::Ones(2), 1);
    const auto bb = bounding_box(S);
    EXPECT_NEAR(bb[0].second, 1.0, 1e-12);
    McConfig cfg;
    cfg.samples = 40000;
    const Estimate e = probability_over_region_direct(S, [](std::span<const double>) { return 1.0; }, cfg, 4);
    EXPECT_NEAR(e.value, 0.5, 5 * e.sigma + 1e-4);
}

TEST(Region, FullDimensional) {
    EXPECT_TRUE(full_dimensional(box(2, 0, 1)));
    HPolytope flat = box(2, 0, 1);
    flat.add_row(VectorXd::Unit(2, 1), 0);  // y <= 0 flattens to a segment
    EXPECT_FALSE(full_dimensional(flat));
}

TEST(Region, ReservoirLocationRegion) {
    // Location entered when Tg0 fires before Td0: s <= t <= min(5, 2s).
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const Region r = location_to_region(t, 2);
    ASSERT_EQ(r.polytope.dim(), 2);
    const auto v = vertex_enumeration(r.polytope);
    ASSERT_EQ(v.size(), 3u);
    auto has = [&](double s, double tt) {
        for (const auto& x : v)
            if (std::abs(x[0] - s) < 1e-7 && std::abs(x[1] - tt) < 1e-7) return true;
        return false;
    };
    EXPECT_TRUE(has(0, 0));
    EXPECT_TRUE(has(2.5, 5));
    EXPECT_TRUE(has(5, 5));
    const auto slice = vertex_enumeration(time_slice(r, 3.0));
    ASSERT_EQ(slice.size(), 2u);
    EXPECT_NEAR(std::min(slice[0][0], slice[1][0]), 1.5, 1e-9);
    EXPECT_NEAR(std::max(slice[0][0], slice[1][0]), 3.0, 1e-9);
}

TEST(Geometric, ReservoirMethodsAgree) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    McConfig cfg;
    cfg.samples = 20000;
    const Property p = parse_property("x(Pc0) >= 5", t.model);
    for (auto m : {GeometricMethod::Simplices, GeometricMethod::Polytopes}) {
        const auto all = geometric_transient(t, 8.0, Property{}, m, cfg);
        EXPECT_NEAR(all.total, 1.0, 3 * all.error + 1e-3);
        const auto half = geometric_transient(t, 8.0, p, m, cfg);
        EXPECT_NEAR(half.total, 0.5, 3 * half.error + 1e-3);
    }
}
