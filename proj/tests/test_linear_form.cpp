#include <gtest/gtest.h>

#include "hpng/linear_form.hpp"

using namespace hpng;

TEST(LinearForm, ArithmeticAndTrim) {
    LinearForm f(2.0, {1.0, 0.0, 3.0});
    LinearForm g = LinearForm::variable(2, 3.0);
    LinearForm h = f - g;
    EXPECT_EQ(h.size(), 1u);
    EXPECT_DOUBLE_EQ(h.constant(), 2.0);
    EXPECT_DOUBLE_EQ(h.coeff(0), 1.0);
    EXPECT_DOUBLE_EQ(h.coeff(5), 0.0);
    EXPECT_TRUE((f - f).is_constant(1e-12));
    EXPECT_TRUE((2.0 * f).approx_equal(f + f, 1e-12));
    EXPECT_TRUE((f / 2.0 * 2.0).approx_equal(f, 1e-12));
}

TEST(LinearForm, Evaluate) {
    LinearForm f(5.0, {-1.0, 2.0});
    const double x[] = {1.0, 3.0};
    EXPECT_DOUBLE_EQ(f.evaluate(x), 10.0);
}

TEST(LinearForm, SubstituteAndDrop) {
    // 1 + o0 + 2 o1 with o1 := 3 - o0 gives 7 - o0.
    LinearForm f(1.0, {1.0, 2.0});
    LinearForm s = f.substitute(1, LinearForm(3.0, {-1.0}));
    EXPECT_TRUE(s.approx_equal(LinearForm(7.0, {-1.0}), 1e-12));
    LinearForm d = LinearForm(0.0, {1.0, 0.0, 4.0}).drop_variable(0);
    EXPECT_TRUE(d.approx_equal(LinearForm(0.0, {0.0, 4.0}), 1e-12));
}

TEST(LinearForm, ToString) {
    EXPECT_EQ(LinearForm(5.0, {-1.0}).to_string(), "5 - o0");
    EXPECT_EQ(LinearForm(0.0, {2.0}).to_string({"s0^0"}), "2*s0^0");
    EXPECT_EQ(LinearForm(7.5).to_string(), "7.5");
}

TEST(ExtremalValue, TriangularDomain) {
    // o0 in [0, 5], o1 in [o0, 10]: o1 - 2 o0 ranges over [-5, 10].
    std::vector<SymInterval> dom{{LinearForm(0.0), LinearForm(5.0)},
                                 {LinearForm::variable(0), LinearForm(10.0)}};
    LinearForm f(0.0, {-2.0, 1.0});
    const auto lo = extremal_value(f, dom, Sense::Min);
    const auto hi = extremal_value(f, dom, Sense::Max);
    ASSERT_TRUE(lo.finite());
    ASSERT_TRUE(hi.finite());
    EXPECT_NEAR(lo.value, -5.0, 1e-12);
    EXPECT_NEAR(hi.value, 10.0, 1e-12);
}

TEST(ExtremalValue, UnboundedUpper) {
    std::vector<SymInterval> dom{{LinearForm(2.0), std::nullopt}};
    EXPECT_TRUE(extremal_value(LinearForm::variable(0), dom, Sense::Max).is_plus_inf());
    EXPECT_NEAR(extremal_value(LinearForm::variable(0), dom, Sense::Min).value, 2.0, 1e-12);
    EXPECT_TRUE(extremal_value(-LinearForm::variable(0), dom, Sense::Min).is_minus_inf());
}

TEST(CompareRemainingTimes, Cases) {
    using K = ComparisonOutcome::Kind;
    EXPECT_EQ(compare_remaining_times(LinearForm(3.0), LinearForm(3.0)).kind, K::Equal);
    EXPECT_EQ(compare_remaining_times(LinearForm(2.0), LinearForm(3.0)).kind, K::AlwaysMinimal);
    EXPECT_EQ(compare_remaining_times(LinearForm(4.0), LinearForm(3.0)).kind, K::NeverMinimal);
    // o0 <= 5 - o0 holds iff o0 <= 2.5.
    const auto c = compare_remaining_times(LinearForm::variable(0), LinearForm(5.0, {-1.0}));
    EXPECT_EQ(c.kind, K::UpperBound);
    EXPECT_EQ(c.k, 0u);
    EXPECT_NEAR(c.bound.constant(), 2.5, 1e-12);
    // 5 - o0 <= o0 holds iff o0 >= 2.5.
    const auto d = compare_remaining_times(LinearForm(5.0, {-1.0}), LinearForm::variable(0));
    EXPECT_EQ(d.kind, K::LowerBound);
    EXPECT_NEAR(d.bound.constant(), 2.5, 1e-12);
    // The highest differing variable carries the bound: o1 <= o0 + 1.
    const auto e = compare_remaining_times(LinearForm(0.0, {0.0, 1.0}), LinearForm(1.0, {1.0}));
    EXPECT_EQ(e.kind, K::UpperBound);
    EXPECT_EQ(e.k, 1u);
    EXPECT_TRUE(e.bound.approx_equal(LinearForm(1.0, {1.0}), 1e-12));
}

TEST(FormatNumber, Compact) {
    EXPECT_EQ(format_number(2.5), "2.5");
    EXPECT_EQ(format_number(10.0), "10");
}
