#include "hpng/region.hpp"

#include <chrono>
#include <cmath>

#include "hpng/errors.hpp"
#include "hpng/parallel.hpp"

namespace hpng {

void add_form(HPolytope& P, const LinearForm& f) {
    if (f.size() > std::size_t(P.dim())) throw DimensionError("form references a coordinate outside the polytope");
    Eigen::VectorXd a = Eigen::VectorXd::Zero(P.dim());
    for (std::size_t k = 0; k < f.size(); ++k) a(long(k)) = -f.coeff(k);
    P.add_row(a, f.constant());
}

Region location_to_region(const PLTree& tree, int node) {
    const auto& loc = tree.nodes.at(node);
    Region r;
    r.location = node;
    r.vars = loc.order;
    r.expired = loc.order.size();
    const auto pending = pending_rvs(tree.model, loc.state);
    for (const auto& p : pending) r.vars.push_back(p.id);
    const std::size_t n = r.vars.size();
    const LinearForm t = LinearForm::variable(n);
    HPolytope P(int(n) + 1);

    for (const auto& f : piece_constraints(loc.domain)) add_form(P, f);
    for (std::size_t k = 0; k < n; ++k) {
        add_form(P, LinearForm::variable(k));
        add_form(P, LinearForm(tree.tauMax) - LinearForm::variable(k));
    }
    const LinearForm elapsed = t - loc.entryTime;
    for (std::size_t j = 0; j < pending.size(); ++j) {
        LinearForm f = LinearForm::variable(r.expired + j) - pending[j].lower;
        if (pending[j].enabled) f -= elapsed;
        add_form(P, f);
    }
    add_form(P, elapsed);
    for (const auto& ev : loc.exitEvents) add_form(P, ev.delta - elapsed);
    add_form(P, t);
    add_form(P, LinearForm(tree.tauMax) - t);
    P.canonicalize();
    if (vertex_enumeration(P).empty())
        throw GeometryError("region of location " + std::to_string(node) + " is empty");
    r.polytope = std::move(P);
    return r;
}

HPolytope time_slice(const Region& region, double tPrime) {
    const HPolytope& P = region.polytope;
    const int n = P.dim() - 1;
    HPolytope S(n);
    for (int i = 0; i < P.rows(); ++i)
        S.add_row(P.A.row(i).head(n).transpose(), P.b(i) - P.A(i, n) * tPrime);
    S.canonicalize();
    return S;
}

namespace {

bool feasible_point(const HPolytope& P) {
    for (int i = 0; i < P.rows(); ++i)
        if (P.b(i) < -tolerances().eps) return false;
    return true;
}

Estimate integrate_polytope(const HPolytope& P, const std::vector<DistributionSpec>& dists,
                            GeometricMethod method, const McConfig& cfg, std::uint64_t stream) {
    if (P.dim() == 0) return Estimate{feasible_point(P) ? 1.0 : 0.0, 0.0, 1, 0};
    Density density = [&dists](std::span<const double> x) {
        double v = 1.0;
        for (std::size_t k = 0; k < x.size(); ++k) v *= pdf(dists[k], x[k]);
        return v;
    };
    if (method == GeometricMethod::Polytopes) return probability_over_region_direct(P, density, cfg, stream);
    Estimate acc;
    const auto simplices = triangulate(P);
    for (std::size_t i = 0; i < simplices.size(); ++i)
        acc += probability_over_simplex(simplices[i], density, cfg, mix64(stream + i));
    return acc;
}

}  // namespace

TransientResult geometric_transient(const PLTree& tree, double tPrime, const Property& prop,
                                    GeometricMethod method, const McConfig& cfg, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    TransientResult res;
    res.tPrime = tPrime;
    res.method = method == GeometricMethod::Simplices ? "simplices" : "polytopes";
    const std::vector<int> cand = interval_candidates(tree, tPrime);

    std::vector<LocationResult> per(cand.size());
    std::vector<std::size_t> dims(cand.size(), 0);
    parallel_for(cand.size(), threads, [&](std::size_t i) {
        const int id = cand[i];
        const auto& loc = tree.nodes[id];
        per[i].id = id;
        Region region;
        try {
            region = location_to_region(tree, id);
        } catch (const GeometryError&) {
            return;
        }
        HPolytope slice = time_slice(region, tPrime);
        const std::size_t n = region.vars.size();
        const auto dists = densities(tree.model, region.vars);
        std::vector<std::size_t> tails;
        std::vector<double> tailMass;
        for (std::size_t k = region.expired; k < n; ++k) {
            const double tail = 1.0 - cdf(dists[k], tree.tauMax);
            if (tail > 0.0) {
                tails.push_back(k);
                tailMass.push_back(tail);
            }
        }
        // Term `mask` integrates with the masked tail variables projected out.
        auto term_polytope = [&](const HPolytope& base, std::size_t mask, double& weight,
                                 std::vector<DistributionSpec>& rest) {
            weight = 1.0;
            rest = dists;
            HPolytope P = base;
            for (std::size_t j = tails.size(); j-- > 0;) {
                if (!(mask >> j & 1)) continue;
                weight *= tailMass[j];
                P = project_out(P, int(tails[j]));
                rest.erase(rest.begin() + long(tails[j]));
            }
            return P;
        };
        const std::size_t terms = std::size_t(1) << tails.size();
        bool occupied = false;
        for (std::size_t mask = 0; mask < terms && !occupied; ++mask) {
            double w;
            std::vector<DistributionSpec> rest;
            occupied = full_dimensional(term_polytope(slice, mask, w, rest));
        }
        if (!occupied) return;
        dims[i] = n + 1;
        if (!holds_discrete(prop, loc.state.m)) return;
        const auto levels = level_constraints(loc, tPrime, prop);
        if (!levels) return;
        for (const auto& f : *levels) add_form(slice, f);
        slice.canonicalize();

        Estimate acc;
        for (std::size_t mask = 0; mask < terms; ++mask) {
            double weight;
            std::vector<DistributionSpec> rest;
            const HPolytope P = term_polytope(slice, mask, weight, rest);
            if (!full_dimensional(P)) continue;
            acc += weight * integrate_polytope(P, rest, method, cfg, task_stream(id, mask, 1));
        }
        const double pacc = accumulated_conflict_probability(tree, id);
        per[i].prob = pacc * acc.value;
        per[i].error = pacc * acc.sigma;
        per[i].pieces = 1;
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
