#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hpng/distribution.hpp"

namespace hpng {

enum class CompareOp { Less, LessEq, Equal, GreaterEq, Greater };

std::string op_symbol(CompareOp op);
CompareOp parse_op(const std::string& s);  // throws std::invalid_argument
bool compare(double lhs, CompareOp op, double rhs);

enum class TransitionKind { Deterministic, Immediate, General, StaticContinuous, DynamicContinuous };

std::string kind_key(TransitionKind k);  // JSON group name

struct DiscretePlace {
    std::string id;
    int tokens = 0;
};

struct ContinuousPlace {
    std::string id;
    double level = 0.0;
    double capacity = std::numeric_limits<double>::infinity();
};

struct DynamicTerm {
    int transition = -1;  // static continuous transition
    double coefficient = 0.0;
};

struct Transition {
    std::string id;
    TransitionKind kind = TransitionKind::Immediate;
    double firingTime = 0.0;        // deterministic
    int priority = 0;
    double weight = 1.0;
    DistributionSpec distribution;  // general
    double rate = 0.0;              // static continuous
    double share = 1.0;             // continuous
    double constant = 0.0;          // dynamic: max(constant + sum c_i r_i, 0)
    std::vector<DynamicTerm> terms;

    bool discrete() const {
        return kind == TransitionKind::Deterministic || kind == TransitionKind::Immediate ||
               kind == TransitionKind::General;
    }
    bool continuous() const { return !discrete(); }
};

struct NodeRef {
    enum class Type { DiscretePlace, ContinuousPlace, Transition };
    Type type = Type::Transition;
    int index = -1;
    bool is_place() const { return type != Type::Transition; }
};

enum class ArcKind { Discrete, Continuous, Guard };

struct Arc {
    ArcKind kind = ArcKind::Discrete;
    NodeRef from, to;
    double weight = 1.0;           // discrete, continuous
    CompareOp op = CompareOp::GreaterEq;  // guard
    double threshold = 0.0;        // guard
};

struct Model {
    std::string name;
    std::vector<DiscretePlace> dplaces;
    std::vector<ContinuousPlace> cplaces;
    std::vector<Transition> transitions;  // grouped by kind, file order within a group
    std::vector<Arc> arcs;

    // Adjacency derived from well-typed arcs by finalize().
    struct Flow {
        int index;  // place or transition
        double weight;
    };
    struct Guard {
        bool continuousPlace;
        int place;
        CompareOp op;
        double threshold;
    };
    std::vector<std::vector<Flow>> inputs, outputs;   // per transition, discrete places
    std::vector<std::vector<Guard>> guards;           // per transition
    std::vector<std::vector<Flow>> inflow, outflow;   // per continuous place, transitions

    void finalize();

    int find_transition(const std::string& id) const;
    int find_dplace(const std::string& id) const;
    int find_cplace(const std::string& id) const;
    std::vector<int> transitions_of(TransitionKind k) const;
    std::string place_name(bool continuous, int index) const;
};

Model parse_model(const std::string& text);
Model load_model(const std::string& path);
std::string serialize_model(const Model& m);  // canonical JSON

struct Diagnostic {
    std::string code;
    std::string message;
};

std::vector<Diagnostic> validate(const Model& m);

}  // namespace hpng
