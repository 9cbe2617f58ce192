#include <gtest/gtest.h>

#include <random>

#include "hpng/constraints.hpp"

using namespace hpng;

namespace {

bool satisfies(const std::vector<LinearForm>& geq0, std::span<const double> x, double tol) {
    for (const auto& f : geq0)
        if (f.evaluate(x) < -tol) return false;
    return true;
}

// Sum of piece areas for a 2-D decomposition by nested quadrature (exact for
// piecewise linear bounds at this resolution up to O(h^2)).
double piece_area(const Piece& p, double cap) {
    const int N = 4000;
    const double lo = p[0].lower.evaluate({}), hi = p[0].upper ? p[0].upper->evaluate({}) : cap;
    double area = 0.0;
    const double h = (hi - lo) / N;
    for (int i = 0; i < N; ++i) {
        const double x0[] = {lo + (i + 0.5) * h};
        const double l = p[1].lower.evaluate(x0), u = p[1].upper ? p[1].upper->evaluate(x0) : cap;
        area += std::max(0.0, u - l) * h;
    }
    return area;
}

}  // namespace

TEST(Decompose, Triangle) {
    // x0 >= 0, x1 >= 0, x0 + x1 <= 1.
    std::vector<LinearForm> c{LinearForm::variable(0), LinearForm::variable(1), LinearForm(1.0, {-1.0, -1.0})};
    const auto pieces = decompose(c, 2);
    ASSERT_FALSE(pieces.empty());
    double area = 0.0;
    for (const auto& p : pieces) area += piece_area(p, 10.0);
    EXPECT_NEAR(area, 0.5, 1e-6);
}

TEST(Decompose, Infeasible) {
    std::vector<LinearForm> c{LinearForm(-1.0, {1.0}), LinearForm(0.5, {-1.0})};  // x >= 1, x <= 0.5
    EXPECT_TRUE(decompose(c, 1).empty());
}

TEST(Decompose, ZeroVariables) {
    EXPECT_EQ(decompose({LinearForm(1.0)}, 0).size(), 1u);
    EXPECT_TRUE(decompose({LinearForm(-1.0)}, 0).empty());
}

TEST(Decompose, UnboundedUpper) {
    // x0 in [0, 2], x1 >= x0.
    std::vector<LinearForm> c{LinearForm::variable(0), LinearForm(2.0, {-1.0}), LinearForm(0.0, {-1.0, 1.0})};
    const auto pieces = decompose(c, 2);
    ASSERT_EQ(pieces.size(), 1u);
    EXPECT_TRUE(pieces[0][1].unbounded());
}

TEST(Decompose, SoundAndCompleteOnRandomSystems) {
    // Membership oracle: a point satisfies the system iff it lies in some piece.
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), pt(-0.2, 3.2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<LinearForm> c;
        for (std::size_t k = 0; k < 3; ++k) {
            c.push_back(LinearForm::variable(k));
            c.push_back(LinearForm(3.0) - LinearForm::variable(k));
        }
        for (int r = 0; r < 3; ++r) c.push_back(LinearForm(1.5 + coef(gen), {coef(gen), coef(gen), coef(gen)}));
        const auto pieces = decompose(c, 3);
        int mismatches = 0;
        for (int s = 0; s < 2000; ++s) {
            const double x[] = {pt(gen), pt(gen), pt(gen)};
            bool in = false;
            for (const auto& p : pieces) in = in || piece_contains(p, x, 1e-9);
            if (in != satisfies(c, x, 1e-9)) ++mismatches;
        }
        EXPECT_EQ(mismatches, 0) << "trial " << trial;
    }
}

TEST(Decompose, TriangularDependency) {
    std::vector<LinearForm> c{LinearForm::variable(0), LinearForm(4.0, {-1.0}), LinearForm(0.0, {-1.0, 1.0}),
                              LinearForm(6.0, {-1.0, -1.0}), LinearForm(0.0, {0.0, -1.0, 1.0}),
                              LinearForm(5.0, {0.0, 0.0, -1.0})};
    for (const auto& p : decompose(c, 3))
        for (std::size_t k = 0; k < p.size(); ++k) {
            EXPECT_LT(p[k].lower.highest_index(1e-12), int(k));
            if (p[k].upper) EXPECT_LT(p[k].upper->highest_index(1e-12), int(k));
        }
}

TEST(PropagateBox, Bounds) {
    std::vector<LinearForm> c{LinearForm::variable(0), LinearForm(4.0, {-1.0}), LinearForm(-1.0, {-1.0, 1.0})};
    const auto box = propagate_box(c, 2);
    ASSERT_EQ(box.size(), 2u);
    EXPECT_NEAR(box[0].first, 0.0, 1e-12);
    EXPECT_NEAR(box[0].second, 4.0, 1e-12);
    EXPECT_NEAR(box[1].first, 1.0, 1e-12);
}

TEST(PiecePoint, StaysInside) {
    Piece p{{LinearForm(1.0), LinearForm(3.0)}, {LinearForm::variable(0), std::nullopt}};
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double unit[] = {u(gen), u(gen)};
        const auto x = piece_point(p, unit, 10.0);
        EXPECT_TRUE(piece_contains(p, x, 1e-12));
        EXPECT_LE(x[1], 10.0);
    }
}
