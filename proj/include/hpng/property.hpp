#pragma once

#include <string>
#include <vector>

#include "hpng/model.hpp"

namespace hpng {

// m(place) OP int or x(place) OP real.
struct Atom {
    bool continuous = false;
    int place = -1;
    CompareOp op = CompareOp::Equal;
    double value = 0.0;
};

// Conjunction of atoms; empty means true.
struct Property {
    std::vector<Atom> atoms;
    std::string text;
};

// Conjunctions joined by "&&", "&" or "and". Throws ParseError.
Property parse_property(const std::string& text, const Model& m);

bool holds_discrete(const Property& p, const std::vector<int>& marking);
bool holds(const Property& p, const std::vector<int>& marking, const std::vector<double>& levels);

}  // namespace hpng
