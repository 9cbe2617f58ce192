#include "hpng/analysis.hpp"

#include "json.hpp"

#include "hpng/errors.hpp"
#include "hpng/region.hpp"

namespace hpng {

std::string method_name(Method m) {
    switch (m) {
        case Method::Intervals: return "intervals";
        case Method::Simplices: return "simplices";
        case Method::Polytopes: return "polytopes";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "intervals") return Method::Intervals;
    if (s == "simplices") return Method::Simplices;
    if (s == "polytopes") return Method::Polytopes;
    throw ConfigError("unknown method '" + s + "' (intervals, simplices, polytopes)");
}

TransientResult analyze(const PLTree& tree, double tPrime, const Property& prop, Method method,
                        const McConfig& cfg, unsigned threads) {
    switch (method) {
        case Method::Intervals: return transient_probability(tree, tPrime, prop, cfg, threads);
        case Method::Simplices:
            return geometric_transient(tree, tPrime, prop, GeometricMethod::Simplices, cfg, threads);
        case Method::Polytopes:
            return geometric_transient(tree, tPrime, prop, GeometricMethod::Polytopes, cfg, threads);
    }
    throw ConfigError("unknown method");
}

std::string result_json(const TransientResult& r, bool withTiming) {
    nlohmann::ordered_json j;
    j["tPrime"] = r.tPrime;
    j["method"] = r.method;
    j["total"] = r.total;
    j["error"] = r.error;
    j["dimension"] = r.dimension;
    auto per = nlohmann::ordered_json::array();
    for (const auto& l : r.perLocation)
        per.push_back({{"id", l.id}, {"prob", l.prob}, {"error", l.error}, {"pieces", l.pieces}});
    j["perLocation"] = per;
    if (withTiming) j["wallTimeMs"] = r.wallTimeMs;
    return j.dump(2) + "\n";
}

std::string simulation_json(const SimEstimate& e, double tPrime, const Property& prop, bool withTiming) {
    nlohmann::ordered_json j;
    j["tPrime"] = tPrime;
    j["method"] = "simulation";
    j["property"] = prop.text;
    j["pHat"] = e.p;
    j["ciHalfWidth"] = e.halfWidth;
    j["runs"] = e.runs;
    if (withTiming) j["wallTimeMs"] = e.wallTimeMs;
    return j.dump(2) + "\n";
}

}  // namespace hpng
