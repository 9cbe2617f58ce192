#include "hpng/transient.hpp"

#include <chrono>
#include <cmath>

#include "hpng/errors.hpp"
#include "hpng/parallel.hpp"

namespace hpng {

namespace {

void check_time(const PLTree& tree, double tPrime) {
    const double tol = tolerances().eps;
    if (!(tPrime >= -tol && tPrime <= tree.tauMax + tol))
        throw RangeError("t' = " + format_number(tPrime) + " outside [0, tauMax = " + format_number(tree.tauMax) + "]");
}

bool interval_candidate(const PLTree& tree, int id, double tPrime) {
    const double tol = tolerances().eps;
    const auto& loc = tree.nodes[id];
    if (!loc.expanded) return false;
    const ExtendedReal lo = min_entry_time(loc);
    if (!lo.finite() || lo.value > tPrime + tol) return false;
    const ExtendedReal hi = max_exit_time(tree, id);
    return hi.is_plus_inf() || (hi.finite() && hi.value >= tPrime - tol);
}

}  // namespace

std::uint64_t task_stream(int node, std::size_t piece, std::size_t term) {
    return (std::uint64_t(node) << 32) ^ (std::uint64_t(piece) << 12) ^ std::uint64_t(term);
}

std::vector<int> candidates(const PLTree& tree, double tPrime) {
    check_time(tree, tPrime);
    std::vector<int> out;
    for (const auto& loc : tree.nodes)
        if (interval_candidate(tree, loc.id, tPrime) && !restrict_domain(tree, loc.id, tPrime).empty())
            out.push_back(loc.id);
    return out;
}

std::vector<int> interval_candidates(const PLTree& tree, double tPrime) {
    check_time(tree, tPrime);
    std::vector<int> out;
    for (const auto& loc : tree.nodes)
        if (interval_candidate(tree, loc.id, tPrime)) out.push_back(loc.id);
    return out;
}

std::optional<std::vector<LinearForm>> level_constraints(const ParametricLocation& loc, double tPrime,
                                                         const Property& prop) {
    const double tol = tolerances().eps;
    std::vector<LinearForm> out;
    const LinearForm elapsed = LinearForm(tPrime) - loc.entryTime;
    for (const auto& a : prop.atoms) {
        if (!a.continuous) continue;
        const LinearForm level = loc.state.x[a.place] + elapsed * loc.state.d[a.place];
        const LinearForm diff = level - LinearForm(a.value);
        switch (a.op) {
            case CompareOp::Less:
            case CompareOp::LessEq: out.push_back(-diff); break;
            case CompareOp::Greater:
            case CompareOp::GreaterEq: out.push_back(diff); break;
            case CompareOp::Equal:
                if (!diff.is_constant(tol)) return std::nullopt;
                out.push_back(diff);
                out.push_back(-diff);
                break;
        }
    }
    return out;
}

RestrictedDomain restrict_domain(const PLTree& tree, int node, double tPrime, const Property* prop) {
    const auto& loc = tree.nodes.at(node);
    const Model& m = tree.model;
    RestrictedDomain rd;
    rd.vars = loc.order;
    rd.expired = loc.order.size();
    const auto pending = pending_rvs(m, loc.state);
    for (const auto& p : pending) rd.vars.push_back(p.id);
    const std::size_t n = rd.vars.size();

    std::vector<LinearForm> cons = piece_constraints(loc.domain);
    for (std::size_t k = 0; k < rd.expired; ++k) {
        cons.push_back(LinearForm::variable(k));
        cons.push_back(LinearForm(tPrime) - LinearForm::variable(k));
    }
    const LinearForm elapsed = LinearForm(tPrime) - loc.entryTime;
    cons.push_back(elapsed);
    for (const auto& ev : loc.exitEvents) cons.push_back(ev.delta - elapsed);
    for (std::size_t j = 0; j < pending.size(); ++j) {
        LinearForm f = LinearForm::variable(rd.expired + j) - pending[j].lower;
        if (pending[j].enabled) f -= elapsed;
        cons.push_back(f);
    }
    if (prop) {
        auto lv = level_constraints(loc, tPrime, *prop);
        if (!lv) return rd;
        cons.insert(cons.end(), lv->begin(), lv->end());
    }
    rd.pieces = decompose(cons, n);
    return rd;
}

double accumulated_conflict_probability(const PLTree& tree, int node) {
    double p = 1.0;
    for (int id = node; id >= 0; id = tree.nodes.at(id).parent) p *= tree.nodes[id].conflictProb;
    return p;
}

std::vector<DistributionSpec> densities(const Model& m, const std::vector<RvId>& vars) {
    std::vector<DistributionSpec> out;
    for (const auto& v : vars) {
        const Transition& t = m.transitions.at(v.transition);
        if (t.kind != TransitionKind::General) throw ConfigError("RV of non-general transition " + t.id);
        const auto& d = t.distribution;
        const bool ok = d.family == DistributionSpec::Family::Uniform ? d.b > d.a
                        : d.family == DistributionSpec::Family::Exponential ? d.lambda > 0
                                                                            : d.sigma > 0;
        if (!ok) throw ConfigError("transition " + t.id + " has no usable distribution");
        out.push_back(d);
    }
    return out;
}

Estimate integrate_bounded_piece(const Piece& piece, const std::vector<DistributionSpec>& dists,
                                 double tauMax, const McConfig& cfg, std::uint64_t stream) {
    const std::size_t n = piece.size();
    if (n == 0) return Estimate{1.0, 0.0, 1, 0};
    Integrand f = [&, n](std::span<const double> y) {
        double x[64];
        double val = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::span<const double> prefix(x, k);
            const double lo = piece[k].lower.evaluate(prefix);
            const double hi = piece[k].upper ? piece[k].upper->evaluate(prefix) : tauMax;
            const double half = 0.5 * (hi - lo);
            x[k] = 0.5 * (hi + lo) + half * y[k];
            val *= half * pdf(dists[k], x[k]);
            if (val == 0.0) return 0.0;
        }
        return val;
    };
    if (n > 64) throw DimensionError("more than 64 integration variables");
    return integrate(f, IntervalBox(n, {-1.0, 1.0}), cfg, stream);
}

namespace {

Piece remove_variable(const Piece& piece, std::size_t k) {
    Piece out;
    const double tol = tolerances().eps;
    for (std::size_t i = 0; i < piece.size(); ++i) {
        if (i == k) continue;
        SymInterval iv = piece[i];
        if (std::abs(iv.lower.coeff(k)) > tol || (iv.upper && std::abs(iv.upper->coeff(k)) > tol))
            throw StructuralError("cannot drop o" + std::to_string(k) + ": a later bound references it");
        iv.lower = iv.lower.drop_variable(k);
        if (iv.upper) iv.upper = iv.upper->drop_variable(k);
        out.push_back(std::move(iv));
    }
    return out;
}

Estimate correction_rec(const Piece& piece, const std::vector<DistributionSpec>& dists, double tauMax,
                        const McConfig& cfg, std::uint64_t stream, std::size_t from) {
    for (std::size_t k = from; k < piece.size(); ++k) {
        if (piece[k].upper) continue;
        const double tail = 1.0 - cdf(dists[k], tauMax);
        if (!(tail > 0.0)) continue;
        // Clipped integral keeps variable k bounded by tauMax; the tail term drops it.
        Estimate kept = correction_rec(piece, dists, tauMax, cfg, mix64(stream * 2 + 1), k + 1);
        std::vector<DistributionSpec> rest = dists;
        rest.erase(rest.begin() + long(k));
        Estimate dropped = correction_rec(remove_variable(piece, k), rest, tauMax, cfg, mix64(stream * 2 + 2), k);
        Estimate sum = kept;
        sum += tail * dropped;
        return sum;
    }
    return integrate_bounded_piece(piece, dists, tauMax, cfg, stream);
}

}  // namespace

Estimate truncation_correction(const Piece& piece, const std::vector<DistributionSpec>& dists,
                               double tauMax, const McConfig& cfg, std::uint64_t stream) {
    return correction_rec(piece, dists, tauMax, cfg, stream, 0);
}

TransientResult transient_probability(const PLTree& tree, double tPrime, const Property& prop,
                                      const McConfig& cfg, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    check_time(tree, tPrime);
    TransientResult res;
    res.tPrime = tPrime;
    res.method = "intervals";
    const std::vector<int> cand = interval_candidates(tree, tPrime);

    std::vector<LocationResult> per(cand.size());
    std::vector<std::size_t> dims(cand.size(), 0);
    parallel_for(cand.size(), threads, [&](std::size_t i) {
        const int id = cand[i];
        const auto& loc = tree.nodes[id];
        per[i].id = id;
        const RestrictedDomain occ = restrict_domain(tree, id, tPrime);
        if (!occ.empty()) dims[i] = occ.vars.size() + 1;
        if (!holds_discrete(prop, loc.state.m)) return;
        const RestrictedDomain rd = restrict_domain(tree, id, tPrime, &prop);
        if (rd.empty()) return;
        const auto dists = densities(tree.model, rd.vars);
        Estimate acc;
        for (std::size_t p = 0; p < rd.pieces.size(); ++p)
            acc += truncation_correction(rd.pieces[p], dists, tree.tauMax, cfg, task_stream(id, p, 0));
        const double pacc = accumulated_conflict_probability(tree, id);
        per[i].prob = pacc * acc.value;
        per[i].error = pacc * acc.sigma;
        per[i].pieces = rd.pieces.size();
    });
    double var = 0.0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        res.dimension = std::max(res.dimension, dims[i]);
        if (per[i].pieces == 0) continue;
        res.total += per[i].prob;
        var += per[i].error * per[i].error;
        res.perLocation.push_back(per[i]);
    }
    res.error = std::sqrt(var);
    res.wallTimeMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace hpng
