#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpng/config.hpp"

namespace hpng {

// Which random variable: the j-th one instantiated for general transition i.
struct RvId {
    int transition = -1;
    int firing = 0;
    auto operator<=>(const RvId&) const = default;
};

// a0 + sum a_k * o[k] over variables in firing order. Trailing zeros trimmed.
class LinearForm {
public:
    LinearForm() = default;
    LinearForm(double constant);  // NOLINT implicit on purpose
    LinearForm(double constant, std::vector<double> coeffs);

    static LinearForm variable(std::size_t k, double coefficient = 1.0);

    double constant() const { return c0_; }
    const std::vector<double>& coeffs() const { return a_; }
    double coeff(std::size_t k) const { return k < a_.size() ? a_[k] : 0.0; }
    std::size_t size() const { return a_.size(); }

    // Highest index with |coefficient| > tol, or -1.
    int highest_index(double tol) const;
    bool is_constant(double tol) const { return highest_index(tol) < 0; }

    double evaluate(std::span<const double> assignment) const;

    bool approx_equal(const LinearForm& other, double tol) const;

    // Form with coefficient k removed; later variables shift down by one.
    LinearForm drop_variable(std::size_t k) const;
    // Replace o[k] by the form `by` (which must not reference o[k]).
    LinearForm substitute(std::size_t k, const LinearForm& by) const;

    LinearForm& operator+=(const LinearForm& o);
    LinearForm& operator-=(const LinearForm& o);
    LinearForm& operator*=(double s);

    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
    friend LinearForm operator*(LinearForm a, double s) { return a *= s; }
    friend LinearForm operator*(double s, LinearForm a) { return a *= s; }
    friend LinearForm operator/(LinearForm a, double s) { return a *= 1.0 / s; }
    LinearForm operator-() const { return *this * -1.0; }

    // Human readable, e.g. "5 - o0". `names` overrides the variable names.
    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    void trim();
    double c0_ = 0.0;
    std::vector<double> a_;
};

std::string format_number(double v);

// Closed interval with an explicit +inf marker for the upper bound.
struct SymInterval {
    LinearForm lower;
    std::optional<LinearForm> upper;  // nullopt means +inf

    bool unbounded() const { return !upper.has_value(); }
    std::string to_string(const std::vector<std::string>& names = {}) const;
};

// A real or one of the two infinities.
struct ExtendedReal {
    enum class Kind { Finite, PlusInf, MinusInf };
    Kind kind = Kind::Finite;
    double value = 0.0;

    static ExtendedReal plus_inf() { return {Kind::PlusInf, 0.0}; }
    static ExtendedReal minus_inf() { return {Kind::MinusInf, 0.0}; }
    bool finite() const { return kind == Kind::Finite; }
    bool is_plus_inf() const { return kind == Kind::PlusInf; }
    bool is_minus_inf() const { return kind == Kind::MinusInf; }
    // Finite value, or +/-HUGE_VAL for display and ordering only.
    double as_double() const;
};

enum class Sense { Min, Max };

// Substitutes bounds from the highest variable down (order-respecting domain).
ExtendedReal extremal_value(const LinearForm& form, const std::vector<SymInterval>& domain,
                            Sense sense);

struct ComparisonOutcome {
    enum class Kind { Equal, UpperBound, LowerBound, NeverMinimal, AlwaysMinimal };
    Kind kind = Kind::Equal;
    std::size_t k = 0;    // variable the bound applies to
    LinearForm bound;     // over o[0..k-1]
    double gap = 0.0;     // constant difference dtc - dtstar for the constant cases
};

// Condition dtc <= dtstar rewritten as a bound on the highest differing variable.
ComparisonOutcome compare_remaining_times(const LinearForm& dtc, const LinearForm& dtstar);

}  // namespace hpng
