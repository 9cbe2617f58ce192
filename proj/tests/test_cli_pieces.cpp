#include <gtest/gtest.h>

#include "json.hpp"

#include "hpng/analysis.hpp"
#include "hpng/errors.hpp"
#include "test_support.hpp"

using namespace hpng;

TEST(Methods, NamesRoundTrip) {
    for (auto m : {Method::Intervals, Method::Simplices, Method::Polytopes}) EXPECT_EQ(parse_method(method_name(m)), m);
    EXPECT_THROW(parse_method("quadrature"), ConfigError);
}

TEST(ResultJson, StableWithoutTiming) {
    const PLTree t = build_plt(test::battery(), 8.0);
    const Property p = parse_property("m(Pd0)=1", t.model);
    McConfig cfg;
    cfg.samples = 5000;
    for (auto m : {Method::Intervals, Method::Simplices, Method::Polytopes}) {
        const std::string a = result_json(analyze(t, 8.0, p, m, cfg), false);
        const std::string b = result_json(analyze(t, 8.0, p, m, cfg), false);
        EXPECT_EQ(a, b) << method_name(m);
        const auto j = nlohmann::json::parse(a);
        EXPECT_EQ(j.at("method"), method_name(m));
        EXPECT_FALSE(j.contains("wallTimeMs"));
        EXPECT_TRUE(j.at("perLocation").is_array());
    }
}

TEST(ResultJson, Fields) {
    const PLTree t = build_plt(test::reservoir(), 10.0);
    const auto j = nlohmann::json::parse(result_json(analyze(t, 8.0, Property{}, Method::Intervals, McConfig{})));
    for (const char* k : {"tPrime", "method", "total", "error", "dimension", "perLocation", "wallTimeMs"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_NEAR(j.at("total").get<double>(), 1.0, 1e-9);
    EXPECT_EQ(j.at("dimension").get<int>(), 2);
}

TEST(SimulationJson, Fields) {
    const Model m = test::reservoir();
    SimEstimate e{0.25, 0.001, 1000, 3.0};
    const auto j = nlohmann::json::parse(simulation_json(e, 8.0, parse_property("m(Pd0)=1", m), false));
    EXPECT_EQ(j.at("method"), "simulation");
    EXPECT_EQ(j.at("property"), "m(Pd0)=1");
    EXPECT_DOUBLE_EQ(j.at("pHat").get<double>(), 0.25);
    EXPECT_EQ(j.at("runs").get<int>(), 1000);
    EXPECT_FALSE(j.contains("wallTimeMs"));
}
