#include "hpng/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hpng/errors.hpp"

namespace hpng {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string op_symbol(CompareOp op) {
    switch (op) {
        case CompareOp::Less: return "<";
        case CompareOp::LessEq: return "<=";
        case CompareOp::Equal: return "=";
        case CompareOp::GreaterEq: return ">=";
        case CompareOp::Greater: return ">";
    }
    return "?";
}

CompareOp parse_op(const std::string& s) {
    if (s == "<") return CompareOp::Less;
    if (s == "<=" || s == "≤") return CompareOp::LessEq;
    if (s == "=" || s == "==") return CompareOp::Equal;
    if (s == ">=" || s == "≥") return CompareOp::GreaterEq;
    if (s == ">") return CompareOp::Greater;
    throw std::invalid_argument("unknown comparison '" + s + "'");
}

bool compare(double l, CompareOp op, double r) {
    switch (op) {
        case CompareOp::Less: return l < r;
        case CompareOp::LessEq: return l <= r;
        case CompareOp::Equal: return l == r;
        case CompareOp::GreaterEq: return l >= r;
        case CompareOp::Greater: return l > r;
    }
    return false;
}

std::string kind_key(TransitionKind k) {
    switch (k) {
        case TransitionKind::Deterministic: return "deterministic";
        case TransitionKind::Immediate: return "immediate";
        case TransitionKind::General: return "general";
        case TransitionKind::StaticContinuous: return "staticContinuous";
        case TransitionKind::DynamicContinuous: return "dynamicContinuous";
    }
    return "?";
}

namespace {

constexpr TransitionKind kKinds[] = {TransitionKind::Deterministic, TransitionKind::Immediate,
                                     TransitionKind::General, TransitionKind::StaticContinuous,
                                     TransitionKind::DynamicContinuous};

struct Reader {
    const json& root;

    static std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }

    static double number(const json& j, const std::string& ptr) {
        if (!j.is_number()) throw ParseError(ptr, "expected a number");
        return j.get<double>();
    }

    static double number_or(const json& obj, const std::string& key, double def,
                            const std::string& ptr) {
        auto it = obj.find(key);
        if (it == obj.end()) return def;
        return number(*it, at(ptr, key));
    }

    static std::string string_of(const json& obj, const std::string& key, const std::string& ptr) {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) throw ParseError(at(ptr, key), "expected a string");
        return it->get<std::string>();
    }

    static const json* array_at(const json& obj, const std::string& key, const std::string& ptr) {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return nullptr;
        if (!it->is_array()) throw ParseError(at(ptr, key), "expected an array");
        return &*it;
    }

    static DistributionSpec distribution(const json& j, const std::string& ptr) {
        if (!j.is_object()) throw ParseError(ptr, "distribution must be an object");
        const std::string fam = string_of(j, "family", ptr);
        auto need = [&](const char* key) {
            auto it = j.find(key);
            if (it == j.end()) throw ParseError(at(ptr, key), "missing distribution parameter");
            return number(*it, at(ptr, key));
        };
        DistributionSpec d;
        if (fam == "uniform") {
            d = DistributionSpec::uniform(need("a"), need("b"));
            if (!(d.a >= 0.0 && d.b > d.a)) throw ParseError(ptr, "uniform needs 0 <= a < b");
        } else if (fam == "normal" || fam == "foldedNormal") {
            d = fam == "normal" ? DistributionSpec::normal(need("mu"), need("sigma"))
                                : DistributionSpec::folded_normal(need("mu"), need("sigma"));
            if (!(d.sigma > 0.0)) throw ParseError(at(ptr, "sigma"), "sigma must be positive");
        } else if (fam == "exponential") {
            d = DistributionSpec::exponential(need("lambda"));
            if (!(d.lambda > 0.0)) throw ParseError(at(ptr, "lambda"), "lambda must be positive");
        } else {
            throw ParseError(at(ptr, "family"), "unknown distribution family '" + fam + "'");
        }
        return d;
    }
};

}  // namespace

Model parse_model(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    if (!root.is_object()) throw ParseError("/", "model must be a JSON object");
    Model m;
    if (auto it = root.find("name"); it != root.end() && it->is_string()) m.name = *it;

    std::map<std::string, NodeRef> names;
    auto declare = [&](const std::string& id, NodeRef ref, const std::string& ptr) {
        if (id.empty()) throw ParseError(ptr, "empty id");
        if (!names.emplace(id, ref).second) throw ParseError(ptr, "duplicate id '" + id + "'");
    };

    json places = root.value("places", json::object());
    if (!places.is_object()) throw ParseError("/places", "expected an object");
    if (auto* arr = Reader::array_at(places, "discrete", "/places")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const std::string ptr = "/places/discrete/" + std::to_string(i);
            const json& p = (*arr)[i];
            DiscretePlace dp;
            dp.id = Reader::string_of(p, "id", ptr);
            const double tok = Reader::number_or(p, "tokens", 0.0, ptr);
            if (tok < 0 || tok != std::floor(tok))
                throw ParseError(ptr + "/tokens", "tokens must be a non-negative integer");
            dp.tokens = static_cast<int>(tok);
            declare(dp.id, {NodeRef::Type::DiscretePlace, int(m.dplaces.size())}, ptr);
            m.dplaces.push_back(dp);
        }
    }
    if (auto* arr = Reader::array_at(places, "continuous", "/places")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const std::string ptr = "/places/continuous/" + std::to_string(i);
            const json& p = (*arr)[i];
            ContinuousPlace cp;
            cp.id = Reader::string_of(p, "id", ptr);
            cp.level = Reader::number_or(p, "level", 0.0, ptr);
            if (auto it = p.find("capacity"); it != p.end()) {
                if (it->is_string()) {
                    if (*it != "inf") throw ParseError(ptr + "/capacity", "expected a number or \"inf\"");
                } else {
                    cp.capacity = Reader::number(*it, ptr + "/capacity");
                }
            }
            if (cp.level < 0) throw ParseError(ptr + "/level", "level must be non-negative");
            declare(cp.id, {NodeRef::Type::ContinuousPlace, int(m.cplaces.size())}, ptr);
            m.cplaces.push_back(cp);
        }
    }

    json trans = root.value("transitions", json::object());
    if (!trans.is_object()) throw ParseError("/transitions", "expected an object");
    std::vector<std::pair<json, std::string>> pending_terms;  // resolved after all ids exist
    for (TransitionKind k : kKinds) {
        const std::string group = kind_key(k);
        auto* arr = Reader::array_at(trans, group, "/transitions");
        if (!arr) continue;
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const std::string ptr = "/transitions/" + group + "/" + std::to_string(i);
            const json& t = (*arr)[i];
            Transition tr;
            tr.kind = k;
            tr.id = Reader::string_of(t, "id", ptr);
            tr.priority = static_cast<int>(Reader::number_or(t, "priority", 0.0, ptr));
            tr.weight = Reader::number_or(t, "weight", 1.0, ptr);
            if (tr.weight < 0) throw ParseError(ptr + "/weight", "negative weight");
            switch (k) {
                case TransitionKind::Deterministic:
                    if (!t.contains("firingTime")) throw ParseError(ptr, "missing firingTime");
                    tr.firingTime = Reader::number(t["firingTime"], ptr + "/firingTime");
                    break;
                case TransitionKind::General:
                    if (!t.contains("distribution")) throw ParseError(ptr, "missing distribution");
                    tr.distribution = Reader::distribution(t["distribution"], ptr + "/distribution");
                    break;
                case TransitionKind::StaticContinuous:
                    tr.rate = Reader::number_or(t, "rate", 0.0, ptr);
                    tr.share = Reader::number_or(t, "share", 1.0, ptr);
                    if (tr.rate < 0) throw ParseError(ptr + "/rate", "negative rate");
                    break;
                case TransitionKind::DynamicContinuous:
                    tr.constant = Reader::number_or(t, "constant", 0.0, ptr);
                    tr.share = Reader::number_or(t, "share", 1.0, ptr);
                    pending_terms.emplace_back(t.value("terms", json::array()), ptr + "/terms");
                    break;
                default: break;
            }
            declare(tr.id, {NodeRef::Type::Transition, int(m.transitions.size())}, ptr);
            m.transitions.push_back(std::move(tr));
        }
    }
    {
        std::size_t next = 0;
        for (auto& tr : m.transitions) {
            if (tr.kind != TransitionKind::DynamicContinuous) continue;
            const auto& [terms, ptr] = pending_terms[next++];
            if (!terms.is_array()) throw ParseError(ptr, "expected an array");
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const std::string tp = ptr + "/" + std::to_string(i);
                const std::string ref = Reader::string_of(terms[i], "transition", tp);
                auto it = names.find(ref);
                if (it == names.end() || it->second.type != NodeRef::Type::Transition)
                    throw ParseError(tp + "/transition", "unknown transition '" + ref + "'");
                tr.terms.push_back({it->second.index,
                                    Reader::number_or(terms[i], "coefficient", 1.0, tp)});
            }
        }
    }

    json arcs = root.value("arcs", json::object());
    if (!arcs.is_object()) throw ParseError("/arcs", "expected an object");
    const std::pair<const char*, ArcKind> groups[] = {
        {"discrete", ArcKind::Discrete}, {"continuous", ArcKind::Continuous}, {"guard", ArcKind::Guard}};
    for (auto [group, kind] : groups) {
        auto* arr = Reader::array_at(arcs, group, "/arcs");
        if (!arr) continue;
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const std::string ptr = std::string("/arcs/") + group + "/" + std::to_string(i);
            const json& a = (*arr)[i];
            Arc arc;
            arc.kind = kind;
            for (auto [key, dst] : {std::pair{"from", &arc.from}, std::pair{"to", &arc.to}}) {
                const std::string ref = Reader::string_of(a, key, ptr);
                auto it = names.find(ref);
                if (it == names.end()) throw ParseError(ptr + "/" + key, "unknown reference '" + ref + "'");
                *dst = it->second;
            }
            if (kind == ArcKind::Guard) {
                try {
                    arc.op = parse_op(Reader::string_of(a, "op", ptr));
                } catch (const std::invalid_argument& e) {
                    throw ParseError(ptr + "/op", e.what());
                }
                arc.threshold = Reader::number_or(a, "threshold", 0.0, ptr);
            } else {
                arc.weight = Reader::number_or(a, "weight", 1.0, ptr);
                if (arc.weight <= 0) throw ParseError(ptr + "/weight", "weight must be positive");
            }
            m.arcs.push_back(arc);
        }
    }
    m.finalize();
    return m;
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open model file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

void Model::finalize() {
    const std::size_t nt = transitions.size();
    inputs.assign(nt, {});
    outputs.assign(nt, {});
    guards.assign(nt, {});
    inflow.assign(cplaces.size(), {});
    outflow.assign(cplaces.size(), {});
    for (const Arc& a : arcs) {
        const bool fp = a.from.is_place(), tp = a.to.is_place();
        if (fp == tp) continue;
        const NodeRef place = fp ? a.from : a.to;
        const int t = fp ? a.to.index : a.from.index;
        const Transition& tr = transitions[t];
        switch (a.kind) {
            case ArcKind::Discrete:
                if (place.type != NodeRef::Type::DiscretePlace || !tr.discrete()) break;
                (fp ? inputs : outputs)[t].push_back({place.index, a.weight});
                break;
            case ArcKind::Continuous:
                if (place.type != NodeRef::Type::ContinuousPlace || !tr.continuous()) break;
                (fp ? outflow : inflow)[place.index].push_back({t, a.weight});
                break;
            case ArcKind::Guard:
                if (!fp) break;
                guards[t].push_back({place.type == NodeRef::Type::ContinuousPlace, place.index, a.op,
                                     a.threshold});
                break;
        }
    }
}

int Model::find_transition(const std::string& id) const {
    for (std::size_t i = 0; i < transitions.size(); ++i)
        if (transitions[i].id == id) return int(i);
    return -1;
}

int Model::find_dplace(const std::string& id) const {
    for (std::size_t i = 0; i < dplaces.size(); ++i)
        if (dplaces[i].id == id) return int(i);
    return -1;
}

int Model::find_cplace(const std::string& id) const {
    for (std::size_t i = 0; i < cplaces.size(); ++i)
        if (cplaces[i].id == id) return int(i);
    return -1;
}

std::vector<int> Model::transitions_of(TransitionKind k) const {
    std::vector<int> r;
    for (std::size_t i = 0; i < transitions.size(); ++i)
        if (transitions[i].kind == k) r.push_back(int(i));
    return r;
}

std::string Model::place_name(bool continuous, int index) const {
    return continuous ? cplaces[index].id : dplaces[index].id;
}

namespace {

std::string ref_name(const Model& m, const NodeRef& r) {
    switch (r.type) {
        case NodeRef::Type::DiscretePlace: return m.dplaces[r.index].id;
        case NodeRef::Type::ContinuousPlace: return m.cplaces[r.index].id;
        case NodeRef::Type::Transition: return m.transitions[r.index].id;
    }
    return "?";
}

ojson number_json(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) return ojson(static_cast<long long>(v));
    return ojson(v);
}

ojson distribution_json(const DistributionSpec& d) {
    ojson j;
    j["family"] = family_name(d.family);
    switch (d.family) {
        case DistributionSpec::Family::Uniform:
            j["a"] = number_json(d.a);
            j["b"] = number_json(d.b);
            break;
        case DistributionSpec::Family::Normal:
        case DistributionSpec::Family::FoldedNormal:
            j["mu"] = number_json(d.mu);
            j["sigma"] = number_json(d.sigma);
            break;
        case DistributionSpec::Family::Exponential:
            j["lambda"] = number_json(d.lambda);
            break;
    }
    return j;
}

}  // namespace

std::string serialize_model(const Model& m) {
    ojson root;
    if (!m.name.empty()) root["name"] = m.name;
    ojson places;
    places["discrete"] = ojson::array();
    for (const auto& p : m.dplaces) places["discrete"].push_back({{"id", p.id}, {"tokens", p.tokens}});
    places["continuous"] = ojson::array();
    for (const auto& p : m.cplaces) {
        ojson j{{"id", p.id}, {"level", number_json(p.level)}};
        j["capacity"] = std::isinf(p.capacity) ? ojson("inf") : number_json(p.capacity);
        places["continuous"].push_back(j);
    }
    root["places"] = places;
    ojson trans;
    for (TransitionKind k : kKinds) {
        ojson arr = ojson::array();
        for (const auto& t : m.transitions) {
            if (t.kind != k) continue;
            ojson j{{"id", t.id}};
            switch (k) {
                case TransitionKind::Deterministic:
                    j["firingTime"] = number_json(t.firingTime);
                    j["priority"] = t.priority;
                    j["weight"] = number_json(t.weight);
                    break;
                case TransitionKind::Immediate:
                    j["priority"] = t.priority;
                    j["weight"] = number_json(t.weight);
                    break;
                case TransitionKind::General:
                    j["distribution"] = distribution_json(t.distribution);
                    j["priority"] = t.priority;
                    j["weight"] = number_json(t.weight);
                    break;
                case TransitionKind::StaticContinuous:
                    j["rate"] = number_json(t.rate);
                    j["priority"] = t.priority;
                    j["share"] = number_json(t.share);
                    break;
                case TransitionKind::DynamicContinuous: {
                    j["constant"] = number_json(t.constant);
                    ojson terms = ojson::array();
                    for (const auto& term : t.terms)
                        terms.push_back({{"transition", m.transitions[term.transition].id},
                                         {"coefficient", number_json(term.coefficient)}});
                    j["terms"] = terms;
                    j["priority"] = t.priority;
                    j["share"] = number_json(t.share);
                    break;
                }
            }
            arr.push_back(j);
        }
        trans[kind_key(k)] = arr;
    }
    root["transitions"] = trans;
    ojson arcs{{"discrete", ojson::array()}, {"continuous", ojson::array()}, {"guard", ojson::array()}};
    for (const auto& a : m.arcs) {
        ojson j{{"from", ref_name(m, a.from)}, {"to", ref_name(m, a.to)}};
        if (a.kind == ArcKind::Guard) {
            j["op"] = op_symbol(a.op);
            j["threshold"] = number_json(a.threshold);
            arcs["guard"].push_back(j);
        } else {
            j["weight"] = number_json(a.weight);
            arcs[a.kind == ArcKind::Discrete ? "discrete" : "continuous"].push_back(j);
        }
    }
    root["arcs"] = arcs;
    return root.dump(2) + "\n";
}

namespace {

// Feasible level set of one continuous place under a conjunction of guards.
struct LevelSet {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    bool lo_open = false, hi_open = false;

    void meet(CompareOp op, double th) {
        auto lower = [&](double v, bool open) {
            if (v > lo || (v == lo && open)) {
                lo = v;
                lo_open = open;
            }
        };
        auto upper = [&](double v, bool open) {
            if (v < hi || (v == hi && open)) {
                hi = v;
                hi_open = open;
            }
        };
        switch (op) {
            case CompareOp::Less: upper(th, true); break;
            case CompareOp::LessEq: upper(th, false); break;
            case CompareOp::Equal: lower(th, false); upper(th, false); break;
            case CompareOp::GreaterEq: lower(th, false); break;
            case CompareOp::Greater: lower(th, true); break;
        }
    }
    bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
};

bool guards_compatible(const Model& m, int t1, int t2) {
    std::map<int, LevelSet> sets;
    for (int t : {t1, t2})
        for (const auto& g : m.guards[t])
            if (g.continuousPlace) {
                auto [it, fresh] = sets.try_emplace(g.place);
                if (fresh) it->second.hi = m.cplaces[g.place].capacity;
                it->second.meet(g.op, g.threshold);
            }
    for (const auto& [p, s] : sets)
        if (s.empty()) return false;
    return true;
}

}  // namespace

std::vector<Diagnostic> validate(const Model& m) {
    std::vector<Diagnostic> out;
    auto diag = [&](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };

    for (const auto& p : m.dplaces)
        if (p.tokens < 0) diag("place", "negative tokens in " + p.id);
    for (const auto& p : m.cplaces) {
        if (!(p.capacity > 0)) diag("place", "capacity of " + p.id + " must be positive");
        if (p.level < 0 || p.level > p.capacity) diag("place", "initial level of " + p.id + " outside [0, capacity]");
    }
    for (const auto& t : m.transitions) {
        if (t.weight < 0) diag("transition", "negative weight on " + t.id);
        switch (t.kind) {
            case TransitionKind::Deterministic:
                if (!(t.firingTime > 0)) diag("transition", "firing time of " + t.id + " must be positive");
                break;
            case TransitionKind::StaticContinuous:
                if (t.rate < 0) diag("transition", "negative rate on " + t.id);
                if (!(t.share > 0)) diag("transition", "share of " + t.id + " must be positive");
                break;
            case TransitionKind::DynamicContinuous:
                if (!(t.share > 0)) diag("transition", "share of " + t.id + " must be positive");
                for (const auto& term : t.terms)
                    if (m.transitions[term.transition].kind != TransitionKind::StaticContinuous)
                        diag("dynamic", t.id + " references non-static transition " +
                                            m.transitions[term.transition].id);
                break;
            default: break;
        }
    }
    for (std::size_t i = 0; i < m.arcs.size(); ++i) {
        const Arc& a = m.arcs[i];
        const std::string label = ref_name(m, a.from) + " -> " + ref_name(m, a.to);
        if (a.from.is_place() == a.to.is_place()) {
            diag("bipartite", "arc " + label + " does not connect a place with a transition");
            continue;
        }
        const NodeRef place = a.from.is_place() ? a.from : a.to;
        const Transition& tr = m.transitions[a.from.is_place() ? a.to.index : a.from.index];
        switch (a.kind) {
            case ArcKind::Discrete:
                if (place.type != NodeRef::Type::DiscretePlace || !tr.discrete())
                    diag("bipartite", "discrete arc " + label + " must join a discrete place and a discrete transition");
                else if (a.weight != std::floor(a.weight) || a.weight < 1)
                    diag("arc", "discrete arc " + label + " needs a positive integer weight");
                break;
            case ArcKind::Continuous:
                if (place.type != NodeRef::Type::ContinuousPlace || !tr.continuous())
                    diag("bipartite", "continuous arc " + label + " must join a continuous place and a continuous transition");
                else if (!(a.weight > 0))
                    diag("arc", "continuous arc " + label + " needs a positive weight");
                break;
            case ArcKind::Guard:
                if (!a.from.is_place())
                    diag("guard", "guard arc " + label + " must lead from a place to a transition");
                else if (place.type == NodeRef::Type::ContinuousPlace && !tr.discrete())
                    diag("guard", "guard arc " + label + " on a continuous place must target a discrete transition");
                break;
        }
    }

    // Zero-time reachability among immediate and general transitions.
    std::vector<int> zt;
    for (std::size_t i = 0; i < m.transitions.size(); ++i)
        if (m.transitions[i].kind == TransitionKind::Immediate ||
            m.transitions[i].kind == TransitionKind::General)
            zt.push_back(int(i));
    std::map<int, std::vector<int>> succ;
    for (int t1 : zt)
        for (int t2 : zt) {
            bool feeds = false;
            for (const auto& o : m.outputs[t1]) {
                for (const auto& in : m.inputs[t2])
                    if (in.index == o.index) feeds = true;
                for (const auto& g : m.guards[t2])
                    if (!g.continuousPlace && g.place == o.index) feeds = true;
            }
            if (feeds && guards_compatible(m, t1, t2)) succ[t1].push_back(t2);
        }
    std::map<int, int> color;
    std::vector<int> stack;
    std::function<bool(int)> dfs = [&](int u) {
        color[u] = 1;
        stack.push_back(u);
        for (int v : succ[u]) {
            if (color[v] == 1) {
                std::string cyc;
                auto it = std::find(stack.begin(), stack.end(), v);
                for (; it != stack.end(); ++it) cyc += m.transitions[*it].id + " -> ";
                diag("zeno", "zero-time cycle " + cyc + m.transitions[v].id);
                return true;
            }
            if (color[v] == 0 && dfs(v)) return true;
        }
        stack.pop_back();
        color[u] = 2;
        return false;
    };
    for (int t : zt)
        if (color[t] == 0 && dfs(t)) break;
    return out;
}

}  // namespace hpng
