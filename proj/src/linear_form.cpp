#include "hpng/linear_form.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "hpng/errors.hpp"

namespace hpng {

Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

LinearForm::LinearForm(double constant) : c0_(constant) {}

LinearForm::LinearForm(double constant, std::vector<double> coeffs)
    : c0_(constant), a_(std::move(coeffs)) {
    trim();
}

LinearForm LinearForm::variable(std::size_t k, double coefficient) {
    std::vector<double> a(k + 1, 0.0);
    a[k] = coefficient;
    return LinearForm(0.0, std::move(a));
}

void LinearForm::trim() {
    const double tol = tolerances().eps;
    while (!a_.empty() && std::abs(a_.back()) <= tol) a_.pop_back();
}

int LinearForm::highest_index(double tol) const {
    for (int k = static_cast<int>(a_.size()) - 1; k >= 0; --k)
        if (std::abs(a_[k]) > tol) return k;
    return -1;
}

double LinearForm::evaluate(std::span<const double> assignment) const {
    if (assignment.size() < a_.size())
        throw DimensionError("assignment has " + std::to_string(assignment.size()) +
                             " values, form needs " + std::to_string(a_.size()));
    double v = c0_;
    for (std::size_t k = 0; k < a_.size(); ++k) v += a_[k] * assignment[k];
    return v;
}

bool LinearForm::approx_equal(const LinearForm& o, double tol) const {
    if (std::abs(c0_ - o.c0_) > tol) return false;
    const std::size_t n = std::max(a_.size(), o.a_.size());
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(coeff(k) - o.coeff(k)) > tol) return false;
    return true;
}

LinearForm LinearForm::drop_variable(std::size_t k) const {
    std::vector<double> a;
    a.reserve(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (i != k) a.push_back(a_[i]);
    return LinearForm(c0_, std::move(a));
}

LinearForm LinearForm::substitute(std::size_t k, const LinearForm& by) const {
    const double a = coeff(k);
    if (a == 0.0) return *this;
    if (by.coeff(k) != 0.0) throw StructuralError("substitution references itself");
    LinearForm r = *this;
    if (k < r.a_.size()) r.a_[k] = 0.0;
    r += by * a;
    return r;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
    c0_ += o.c0_;
    if (a_.size() < o.a_.size()) a_.resize(o.a_.size(), 0.0);
    for (std::size_t k = 0; k < o.a_.size(); ++k) a_[k] += o.a_[k];
    trim();
    return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
    c0_ -= o.c0_;
    if (a_.size() < o.a_.size()) a_.resize(o.a_.size(), 0.0);
    for (std::size_t k = 0; k < o.a_.size(); ++k) a_[k] -= o.a_[k];
    trim();
    return *this;
}

LinearForm& LinearForm::operator*=(double s) {
    c0_ *= s;
    for (double& v : a_) v *= s;
    trim();
    return *this;
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::abs(v) < 1e-12) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string LinearForm::to_string(const std::vector<std::string>& names) const {
    std::string out;
    const double tol = tolerances().eps;
    if (std::abs(c0_) > tol) out = format_number(c0_);
    for (std::size_t k = 0; k < a_.size(); ++k) {
        double a = a_[k];
        if (std::abs(a) <= tol) continue;
        const std::string name = k < names.size() ? names[k] : "o" + std::to_string(k);
        if (out.empty()) {
            if (a < 0) out += "-";
        } else {
            out += a < 0 ? " - " : " + ";
        }
        const double m = std::abs(a);
        if (std::abs(m - 1.0) > tol) out += format_number(m) + "*";
        out += name;
    }
    return out.empty() ? "0" : out;
}

std::string SymInterval::to_string(const std::vector<std::string>& names) const {
    return "[" + lower.to_string(names) + ", " + (upper ? upper->to_string(names) : "inf") + "]";
}

double ExtendedReal::as_double() const {
    switch (kind) {
        case Kind::PlusInf: return std::numeric_limits<double>::infinity();
        case Kind::MinusInf: return -std::numeric_limits<double>::infinity();
        default: return value;
    }
}

ExtendedReal extremal_value(const LinearForm& form, const std::vector<SymInterval>& domain,
                            Sense sense) {
    const double tol = tolerances().eps;
    if (form.size() > domain.size())
        throw DimensionError("form references variable beyond the domain");
    for (std::size_t k = 0; k < domain.size(); ++k) {
        const auto& iv = domain[k];
        if (iv.lower.highest_index(0.0) >= static_cast<int>(k) ||
            (iv.upper && iv.upper->highest_index(0.0) >= static_cast<int>(k)))
            throw StructuralError("bound of o" + std::to_string(k) +
                                  " references a later or equal variable");
    }
    LinearForm cur = form;
    for (int k = cur.highest_index(0.0); k >= 0; k = cur.highest_index(0.0)) {
        const double a = cur.coeff(k);
        if (std::abs(a) <= tol) {
            cur = cur.substitute(k, LinearForm(0.0));
            continue;
        }
        const bool want_lower = (sense == Sense::Min) == (a > 0);
        const auto& iv = domain[k];
        if (want_lower) {
            cur = cur.substitute(k, iv.lower);
        } else if (iv.upper) {
            cur = cur.substitute(k, *iv.upper);
        } else {
            return a > 0 ? ExtendedReal::plus_inf() : ExtendedReal::minus_inf();
        }
    }
    return {ExtendedReal::Kind::Finite, cur.constant()};
}

ComparisonOutcome compare_remaining_times(const LinearForm& dtc, const LinearForm& dtstar) {
    const double tol = tolerances().eps;
    ComparisonOutcome out;
    const LinearForm diff = dtc - dtstar;  // alpha - beta
    const int k = diff.highest_index(tol);
    if (k < 0) {
        const double gap = diff.constant();
        out.gap = gap;
        if (std::abs(gap) <= tol) out.kind = ComparisonOutcome::Kind::Equal;
        else if (gap > 0) out.kind = ComparisonOutcome::Kind::NeverMinimal;
        else out.kind = ComparisonOutcome::Kind::AlwaysMinimal;
        return out;
    }
    const double ak = diff.coeff(k);
    // alpha_k o_k + rest_alpha <= beta_k o_k + rest_beta  <=>  (ak) o_k <= -(diff without o_k)
    std::vector<double> c(static_cast<std::size_t>(k), 0.0);
    for (int z = 0; z < k; ++z) c[z] = -diff.coeff(z) / ak;
    out.k = static_cast<std::size_t>(k);
    out.bound = LinearForm(-diff.constant() / ak, std::move(c));
    out.kind = ak > 0 ? ComparisonOutcome::Kind::UpperBound : ComparisonOutcome::Kind::LowerBound;
    return out;
}

}  // namespace hpng
