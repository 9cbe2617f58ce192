#include "hpng/property.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "hpng/errors.hpp"

namespace hpng {

namespace {

struct Lexer {
    const std::string& s;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip();
        return i >= s.size();
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("property:" + std::to_string(i + 1), what);
    }
    bool eat(const std::string& tok) {
        skip();
        if (s.compare(i, tok.size(), tok) == 0) {
            i += tok.size();
            return true;
        }
        return false;
    }
    std::string ident() {
        skip();
        const std::size_t b = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.' ||
                                s[i] == '-'))
            ++i;
        if (b == i) fail("expected a place name");
        return s.substr(b, i - b);
    }
    CompareOp op() {
        skip();
        for (const char* tok : {"<=", ">=", "==", "<", ">", "="}) {
            if (eat(tok)) return parse_op(tok);
        }
        fail("expected a comparison operator");
    }
    double number() {
        skip();
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s.substr(i), &used);
        } catch (const std::exception&) {
            fail("expected a number");
        }
        i += used;
        return v;
    }
};

}  // namespace

Property parse_property(const std::string& text, const Model& m) {
    Property p;
    p.text = text;
    Lexer lx{text};
    if (lx.done()) return p;
    for (;;) {
        Atom a;
        if (lx.eat("m(")) {
            a.continuous = false;
        } else if (lx.eat("x(")) {
            a.continuous = true;
        } else {
            lx.fail("expected m(place) or x(place)");
        }
        const std::string name = lx.ident();
        if (!lx.eat(")")) lx.fail("expected ')'");
        a.place = a.continuous ? m.find_cplace(name) : m.find_dplace(name);
        if (a.place < 0) lx.fail("unknown " + std::string(a.continuous ? "continuous" : "discrete") + " place '" + name + "'");
        a.op = lx.op();
        a.value = lx.number();
        if (!a.continuous && a.value != std::floor(a.value)) lx.fail("marking compares against an integer");
        p.atoms.push_back(a);
        if (lx.done()) break;
        if (!(lx.eat("&&") || lx.eat("&") || lx.eat("and"))) lx.fail("expected '&&'");
    }
    return p;
}

bool holds_discrete(const Property& p, const std::vector<int>& marking) {
    for (const auto& a : p.atoms)
        if (!a.continuous && !compare(double(marking[a.place]), a.op, a.value)) return false;
    return true;
}

bool holds(const Property& p, const std::vector<int>& marking, const std::vector<double>& levels) {
    if (!holds_discrete(p, marking)) return false;
    for (const auto& a : p.atoms)
        if (a.continuous && !compare(levels[a.place], a.op, a.value)) return false;
    return true;
}

}  // namespace hpng
