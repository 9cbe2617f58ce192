#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hpng/errors.hpp"
#include "hpng/simulate.hpp"
#include "hpng/transient.hpp"
#include "test_support.hpp"

using namespace hpng;

namespace {

McConfig quick() {
    McConfig c;
    c.samples = 20000;
    c.iterations = 4;
    return c;
}

// Location occupied at t' for a fixed s0^0, by replaying the simulator path.
int occupied(const PLTree& t, double s, double tPrime) {
    const RvId rv{t.model.find_transition("Tg0"), 0};
    const Trajectory run = simulate_run(t.model, tPrime, {{rv, s}}, nullptr);
    const auto path = plt_path(t, {{rv, s}}, &run.trace);
    return path.back();
}

}  // namespace

TEST(Candidates, Reservoir) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    EXPECT_EQ(candidates(t, 8.0), (std::vector<int>{3, 4, 5, 7, 8}));
    EXPECT_EQ(candidates(t, 4.0), (std::vector<int>{0, 2, 6}));
    EXPECT_EQ(candidates(t, 0.0), (std::vector<int>{0}));
    EXPECT_THROW(candidates(t, 10.5), RangeError);
    EXPECT_THROW(candidates(t, -1.0), RangeError);
}

TEST(Candidates, SimulationGridLandsInCandidates) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    for (double tp : {4.0, 8.0}) {
        const auto cand = candidates(t, tp);
        std::set<int> hit;
        for (double s = 0.0; s <= 12.0 + 1e-12; s += 0.25) {
            const int id = occupied(t, s, tp);
            hit.insert(id);
            EXPECT_NE(std::find(cand.begin(), cand.end(), id), cand.end()) << "s=" << s << " t'=" << tp;
        }
        EXPECT_EQ(hit.size(), cand.size()) << "t'=" << tp;
    }
}

TEST(RestrictDomain, ReservoirAtEight) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const RestrictedDomain l7 = restrict_domain(t, 8, 8.0);
    ASSERT_EQ(l7.pieces.size(), 1u);
    EXPECT_EQ(l7.pieces[0][0].to_string(), "[0, 2.5]");
    const RestrictedDomain l5 = restrict_domain(t, 3, 8.0);
    ASSERT_EQ(l5.pieces.size(), 1u);
    EXPECT_EQ(l5.pieces[0][0].to_string(), "[8, inf]");
    EXPECT_EQ(l5.expired, 0u);
}

TEST(RestrictDomain, EntryExactlyAtTPrime) {
    // l2 is entered at 5 for every s in [5, inf]: at t' = 5 the whole domain stays.
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const RestrictedDomain rd = restrict_domain(t, 1, 5.0);
    ASSERT_EQ(rd.pieces.size(), 1u);
    EXPECT_EQ(rd.pieces[0][0].to_string(), "[5, inf]");
}

TEST(Transient, ReservoirLocationProbability) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const auto r = transient_probability(t, 8.0, Property{}, quick());
    double l7 = -1.0;
    for (const auto& p : r.perLocation)
        if (p.id == 8) l7 = p.prob;
    EXPECT_NEAR(l7, 0.25, 1e-9);  // F(2.5) of U(0, 10)
    EXPECT_NEAR(r.total, 1.0, 1e-9);
}

TEST(Transient, LevelProperty) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const Property p = parse_property("x(Pc0) >= 5", t.model);
    EXPECT_NEAR(transient_probability(t, 8.0, p, quick()).total, 0.5, 1e-3);
}

TEST(Transient, FalsePredicateIsExactlyZero) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const Property p = parse_property("m(Pd0) = 7", t.model);
    const auto r = transient_probability(t, 8.0, p, quick());
    EXPECT_EQ(r.total, 0.0);
    EXPECT_EQ(r.error, 0.0);
    EXPECT_TRUE(r.perLocation.empty());
}

TEST(Transient, Normalization) {
    for (const Model& m : {test::reservoir(), test::battery()}) {
        const PLTree t = build_plt(m, 10.0);
        for (double tp : {1.0, 3.0, 6.5, 9.0}) {
            const auto r = transient_probability(t, tp, Property{}, quick());
            EXPECT_NEAR(r.total, 1.0, 3 * r.error + 1e-3) << m.name << " t'=" << tp;
        }
    }
}

TEST(Transient, BatteryGridAvailable) {
    const PLTree t = build_plt(test::battery(), 8.0);
    const auto r = transient_probability(t, 8.0, parse_property("m(Pd0)=1", t.model), quick());
    EXPECT_NEAR(r.total, 0.200, 0.005);
    EXPECT_EQ(r.dimension, 4u);
}

TEST(Transient, DeterministicAcrossThreads) {
    const PLTree t = build_plt(test::battery(), 8.0);
    const Property p = parse_property("m(Pd0)=1", t.model);
    const auto a = transient_probability(t, 8.0, p, quick(), 1);
    const auto b = transient_probability(t, 8.0, p, quick(), 3);
    EXPECT_EQ(a.total, b.total);
    EXPECT_EQ(a.error, b.error);
}

TEST(ConflictProbability, ConflictFreePath) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    for (const auto& n : t.nodes) EXPECT_DOUBLE_EQ(accumulated_conflict_probability(t, n.id), 1.0);
}

TEST(TruncationCorrection, BoundedSupportNeedsNone) {
    const Piece p{{LinearForm(7.5), std::nullopt}};
    const auto e = truncation_correction(p, {DistributionSpec::uniform(0, 10)}, 10.0, quick(), 1);
    EXPECT_NEAR(e.value, 0.25, 1e-9);
}

TEST(TruncationCorrection, FoldedNormalTail) {
    const DistributionSpec d = DistributionSpec::folded_normal(14, 4);
    const Piece p{{LinearForm(7.5), std::nullopt}};
    const auto e = truncation_correction(p, {d}, 10.0, quick(), 1);
    const double closed =
        1.0 - 0.5 * (std::erf((7.5 + 14) / (4 * std::sqrt(2.0))) + std::erf((7.5 - 14) / (4 * std::sqrt(2.0))));
    EXPECT_NEAR(e.value, closed, 5 * e.sigma + 1e-6);
}

TEST(TruncationCorrection, ExponentialFullSupport) {
    const Piece p{{LinearForm(0.0), std::nullopt}};
    const auto e = truncation_correction(p, {DistributionSpec::exponential(1)}, 5.0, quick(), 1);
    EXPECT_NEAR(e.value, 1.0, 5 * e.sigma + 1e-6);
}

TEST(TruncationCorrection, TwoUnboundedVariables) {
    // P(X >= 1, Y >= 0.5) for iid Exp(1) is e^-1.5.
    const auto d = DistributionSpec::exponential(1);
    const Piece p{{LinearForm(1.0), std::nullopt}, {LinearForm(0.5), std::nullopt}};
    McConfig c = quick();
    c.samples = 100000;
    const auto e = truncation_correction(p, {d, d}, 3.0, c, 2);
    EXPECT_NEAR(e.value, std::exp(-1.5), 5 * e.sigma + 1e-4);
}

TEST(TruncationCorrection, DependentUnboundedRejected) {
    // Pending RVs only ever depend on expired ones; a chain of unbounded
    // variables has no product-form tail.
    const auto d = DistributionSpec::exponential(1);
    const Piece p{{LinearForm(1.0), std::nullopt}, {LinearForm::variable(0), std::nullopt}};
    EXPECT_THROW(truncation_correction(p, {d, d}, 3.0, quick(), 2), StructuralError);
}

TEST(Densities, RejectsNonGeneral) {
    const Model m = test::reservoir();
    EXPECT_THROW(densities(m, {RvId{m.find_transition("Td0"), 0}}), ConfigError);
}

TEST(LevelConstraints, EqualityOnVaryingLevelIsMeasureZero) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const Property p = parse_property("x(Pc0) = 3", t.model);
    EXPECT_FALSE(level_constraints(t.nodes[2], 4.0, p).has_value());
}
