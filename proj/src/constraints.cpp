#include "hpng/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hpng/errors.hpp"

namespace hpng {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Box = std::vector<std::pair<double, double>>;

// Range of form over the box (interval arithmetic).
std::pair<double, double> range(const LinearForm& f, const Box& box) {
    double lo = f.constant(), hi = f.constant();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = f.coeff(i);
        if (a == 0.0) continue;
        const double p = a * box[i].first, q = a * box[i].second;
        lo += std::min(p, q);
        hi += std::max(p, q);
    }
    return {lo, hi};
}

struct Decomposer {
    std::size_t n;
    std::size_t max_pieces;
    Box box;
    double tol;
    std::vector<Piece> out;

    // Appends a constraint; returns false when it is a violated constant.
    // `strict` constraints must have a positive constant margin to survive.
    bool add(std::vector<LinearForm>& cs, LinearForm f, bool strict) const {
        if (f.is_constant(tol)) {
            const double c = f.constant();
            if (strict) return c > tol;
            return c >= -tol;
        }
        auto [lo, hi] = range(f, box);
        if (lo >= -tol && !strict) return true;  // implied by the box
        if (hi < -tol) return false;
        cs.push_back(std::move(f));
        return true;
    }

    static void dedupe(std::vector<LinearForm>& v, double tol) {
        std::vector<LinearForm> r;
        for (auto& f : v) {
            bool dup = false;
            for (auto& g : r)
                if (g.approx_equal(f, tol)) { dup = true; break; }
            if (!dup) r.push_back(std::move(f));
        }
        v = std::move(r);
    }

    // Drop bounds dominated over the box: for lower bounds keep the larger.
    void prune(std::vector<LinearForm>& v, bool keep_larger) const {
        std::vector<char> drop(v.size(), 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (drop[i]) continue;
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (i == j || drop[j]) continue;
                LinearForm d = keep_larger ? v[i] - v[j] : v[j] - v[i];
                if (range(d, box).first >= -tol) drop[j] = 1;  // i dominates j
            }
        }
        std::vector<LinearForm> r;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!drop[i]) r.push_back(v[i]);
        v = std::move(r);
    }

    void rec(int k, const std::vector<LinearForm>& cs, Piece& cur) {
        if (out.size() >= max_pieces) throw ResourceError("piece budget exceeded");
        if (k < 0) {
            out.push_back(cur);
            return;
        }
        std::vector<LinearForm> rest, lowers, uppers;
        for (const auto& f : cs) {
            const int h = f.highest_index(tol);
            if (h != k) {
                rest.push_back(f);
                continue;
            }
            const double a = f.coeff(k);
            std::vector<double> c(static_cast<std::size_t>(k));
            for (int z = 0; z < k; ++z) c[z] = -f.coeff(z) / a;
            LinearForm b(-f.constant() / a, std::move(c));
            (a > 0 ? lowers : uppers).push_back(std::move(b));
        }
        // The box is implied by the system; constraints it implies were dropped.
        if (std::isfinite(box[k].first)) lowers.emplace_back(box[k].first);
        if (std::isfinite(box[k].second)) uppers.emplace_back(box[k].second);
        dedupe(lowers, tol);
        dedupe(uppers, tol);
        prune(lowers, true);
        prune(uppers, false);
        if (lowers.empty())
            throw StructuralError("variable o" + std::to_string(k) + " is unbounded below");

        const std::size_t nu = uppers.empty() ? 1 : uppers.size();
        for (std::size_t i = 0; i < lowers.size(); ++i) {
            for (std::size_t j = 0; j < nu; ++j) {
                std::vector<LinearForm> next = rest;
                bool ok = true;
                for (std::size_t i2 = 0; ok && i2 < lowers.size(); ++i2)
                    if (i2 != i) ok = add(next, lowers[i] - lowers[i2], false);
                for (std::size_t j2 = 0; ok && j2 < uppers.size(); ++j2)
                    if (j2 != j) ok = add(next, uppers[j2] - uppers[j], false);
                if (ok && !uppers.empty()) {
                    LinearForm w = uppers[j] - lowers[i];
                    if (w.is_constant(tol)) ok = w.constant() > tol;
                    else ok = add(next, std::move(w), false);
                }
                if (!ok) continue;
                cur[k].lower = lowers[i];
                if (uppers.empty()) cur[k].upper.reset();
                else cur[k].upper = uppers[j];
                rec(k - 1, next, cur);
            }
        }
    }
};

}  // namespace

std::vector<std::pair<double, double>> propagate_box(const std::vector<LinearForm>& geq0,
                                                     std::size_t n) {
    const double tol = tolerances().eps;
    Box box(n, {-kInf, kInf});
    for (int round = 0; round < 50; ++round) {
        bool changed = false;
        for (const auto& f : geq0) {
            if (f.size() > n) throw DimensionError("constraint references unknown variable");
            if (f.is_constant(tol)) {
                if (f.constant() < -tol) return {};
                continue;
            }
            for (std::size_t j = 0; j < f.size(); ++j) {
                const double a = f.coeff(j);
                if (std::abs(a) <= tol) continue;
                // a x_j + rest >= 0  ->  x_j >= -rest/a (a>0) or x_j <= -rest/a (a<0)
                double rest_hi = f.constant();
                for (std::size_t i = 0; i < f.size(); ++i) {
                    if (i == j) continue;
                    const double b = f.coeff(i);
                    if (b == 0.0) continue;
                    rest_hi += std::max(b * box[i].first, b * box[i].second);
                }
                if (!std::isfinite(rest_hi)) continue;
                const double bound = -rest_hi / a;
                if (a > 0 && bound > box[j].first + 1e-12 * (1 + std::abs(bound))) {
                    box[j].first = bound;
                    changed = true;
                } else if (a < 0 && bound < box[j].second - 1e-12 * (1 + std::abs(bound))) {
                    box[j].second = bound;
                    changed = true;
                }
            }
        }
        for (const auto& [lo, hi] : box)
            if (lo > hi + tol) return {};
        if (!changed) break;
    }
    return box;
}

std::vector<Piece> decompose(const std::vector<LinearForm>& geq0, std::size_t n,
                             std::size_t max_pieces) {
    Decomposer d{n, max_pieces, {}, tolerances().eps, {}};
    d.box = propagate_box(geq0, n);
    if (d.box.empty() && n > 0) return {};
    std::vector<LinearForm> cs;
    for (const auto& f : geq0)
        if (!d.add(cs, f, false)) return {};
    Piece cur(n);
    d.rec(static_cast<int>(n) - 1, cs, cur);
    return std::move(d.out);
}

std::vector<LinearForm> piece_constraints(const Piece& piece) {
    std::vector<LinearForm> cs;
    for (std::size_t k = 0; k < piece.size(); ++k) {
        const LinearForm x = LinearForm::variable(k);
        cs.push_back(x - piece[k].lower);
        if (piece[k].upper) cs.push_back(*piece[k].upper - x);
    }
    return cs;
}

bool piece_contains(const Piece& piece, std::span<const double> x, double tol) {
    for (std::size_t k = 0; k < piece.size(); ++k) {
        if (x[k] < piece[k].lower.evaluate(x) - tol) return false;
        if (piece[k].upper && x[k] > piece[k].upper->evaluate(x) + tol) return false;
    }
    return true;
}

std::vector<double> piece_point(const Piece& piece, std::span<const double> unit, double cap) {
    std::vector<double> x(piece.size(), 0.0);
    for (std::size_t k = 0; k < piece.size(); ++k) {
        const double lo = piece[k].lower.evaluate(x);
        const double hi = piece[k].upper ? piece[k].upper->evaluate(x) : std::max(cap, lo);
        x[k] = lo + unit[k] * (hi - lo);
    }
    return x;
}

}  // namespace hpng
