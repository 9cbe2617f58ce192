#include "hpng/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "hpng/distribution.hpp"
#include "hpng/errors.hpp"
#include "hpng/parallel.hpp"

namespace hpng {

namespace {

void advance(const Model& m, SymState& s, double dt) {
    for (std::size_t p = 0; p < s.x.size(); ++p) {
        double v = s.x[p].constant() + dt * s.d[p];
        const double cap = m.cplaces[p].capacity;
        v = std::clamp(v, 0.0, cap);
        s.x[p] = LinearForm(v);
    }
    for (std::size_t t = 0; t < m.transitions.size(); ++t) {
        if (!s.e[t]) continue;
        if (m.transitions[t].kind == TransitionKind::Deterministic) s.c[t] = LinearForm(s.c[t].constant() + dt);
        else if (m.transitions[t].kind == TransitionKind::General && s.rv[t] >= 0)
            s.g[t] = LinearForm(s.g[t].constant() + dt);
    }
}

std::vector<double> levels_of(const SymState& s) {
    std::vector<double> x;
    for (const auto& f : s.x) x.push_back(f.constant());
    return x;
}

double pending_value(const Model& m, const SymState& s, int t, Assignment& values, CounterRng* rng) {
    const RvId id{t, s.rv[t]};
    auto it = values.find(id);
    if (it != values.end()) return it->second;
    if (!rng) throw ConfigError("no value for RV of " + m.transitions[t].id);
    const double v = quantile(m.transitions[t].distribution, rng->uniform_open());
    values.emplace(id, v);
    return v;
}

}  // namespace

Trajectory simulate_run(const Model& m, double horizon, Assignment values, CounterRng* rng,
                        std::size_t maxEvents) {
    const double tol = tolerances().eps;
    Trajectory run;
    SymState s = initial_state(m);
    double now = 0.0;
    for (;;) {
        std::vector<Event> events = next_events(m, s, Piece{});
        for (auto& ev : events)
            if (ev.kind == EventKind::General)
                ev.delta = LinearForm(pending_value(m, s, ev.element, values, rng) - s.g[ev.element].constant());
        if (events.empty()) break;
        double dt = std::numeric_limits<double>::infinity();
        for (const auto& ev : events) dt = std::min(dt, std::max(ev.delta.constant(), 0.0));
        if (now + dt > horizon + tol) break;
        std::vector<Event> tied, tiedGeneral;
        for (const auto& ev : events)
            if (std::abs(std::max(ev.delta.constant(), 0.0) - dt) <= tol)
                (ev.kind == EventKind::General ? tiedGeneral : tied).push_back(ev);
        // Deterministic events precede coincident random firings.
        auto winners = resolve_conflict(m, tied.empty() ? tiedGeneral : tied);
        Event fire = winners.front().first;
        if (winners.size() > 1) {
            if (!rng) throw ConfigError("probabilistic conflict needs a random stream");
            double u = rng->uniform(), acc = 0.0;
            for (const auto& [ev, p] : winners) {
                fire = ev;
                acc += p;
                if (u < acc) break;
            }
        }
        advance(m, s, dt);
        now += dt;
        switch (fire.kind) {
            case EventKind::Immediate:
            case EventKind::Deterministic:
            case EventKind::General: {
                const int t = fire.element;
                for (const auto& in : m.inputs[t]) s.m[in.index] -= int(in.weight);
                for (const auto& out : m.outputs[t]) s.m[out.index] += int(out.weight);
                if (fire.kind == EventKind::General) {
                    run.order.push_back(RvId{t, s.rv[t]});
                    s.rv[t] = -1;
                    s.g[t] = LinearForm(0.0);
                } else {
                    s.c[t] = LinearForm(0.0);
                }
                break;
            }
            case EventKind::Boundary:
            case EventKind::GuardArc: s.x[fire.place] = LinearForm(fire.level); break;
        }
        settle(m, s, Piece{});
        run.trace.push_back({now, fire.kind, fire.element, s.m, levels_of(s)});
        if (run.trace.size() > maxEvents)
            throw RunawayError("more than " + std::to_string(maxEvents) + " events before t = " + format_number(horizon));
    }
    advance(m, s, std::max(horizon - now, 0.0));
    // RVs that are pending at the horizon also belong to the assignment.
    for (std::size_t t = 0; t < m.transitions.size(); ++t)
        if (m.transitions[t].kind == TransitionKind::General && s.rv[t] >= 0 && rng)
            pending_value(m, s, int(t), values, rng);
    run.values = std::move(values);
    run.marking = s.m;
    run.levels = levels_of(s);
    return run;
}

std::string trace_csv(const Model& m, const Trajectory& run) {
    std::ostringstream os;
    os << "time,kind,element\n";
    for (const auto& e : run.trace) {
        Event ev;
        ev.kind = e.kind;
        ev.element = e.element;
        if (e.kind == EventKind::Boundary) {
            ev.place = e.element;
            ev.level = e.levels[e.element];
        } else if (e.kind == EventKind::GuardArc) {
            ev.place = m.arcs[e.element].from.index;
        }
        os << format_number(e.time) << ',' << event_kind_name(e.kind) << ',' << event_label(m, ev) << '\n';
    }
    return os.str();
}

std::vector<int> plt_path(const PLTree& tree, const Assignment& values, const std::vector<TraceEntry>* trace) {
    const double tol = 1e-7;
    std::vector<int> path{0};
    auto vector_of = [&](const std::vector<RvId>& order, std::vector<double>& out) {
        out.clear();
        for (const auto& id : order) {
            auto it = values.find(id);
            if (it == values.end()) return false;
            out.push_back(it->second);
        }
        return true;
    };
    std::vector<double> x;
    std::size_t step = 0;
    // A place that reaches its boundary at the instant of entry is a zero-time
    // tree edge; the concrete run settles into the boundary without an event.
    auto zero_time_boundary = [&](const ParametricLocation& parent, const ParametricLocation& child) {
        if (child.source->kind != EventKind::Boundary || !vector_of(child.order, x)) return false;
        return std::abs(child.entryTime.evaluate(x) - parent.entryTime.evaluate(x)) <= tol;
    };
    for (int node = 0;;) {
        int next = -1;
        bool consumed = true;
        for (int pass = 0; pass < (trace ? 2 : 1) && next < 0; ++pass)
        for (int c : tree.nodes[node].children) {
            const auto& child = tree.nodes[c];
            if (trace && pass == 0) {
                if (step >= trace->size()) break;
                const auto& want = (*trace)[step];
                if (child.source->kind != want.kind || child.source->element != want.element) continue;
            }
            if (pass == 1 && !zero_time_boundary(tree.nodes[node], child)) continue;
            consumed = pass == 0;
            if (!vector_of(child.order, x)) continue;
            if (!piece_contains(child.domain, x, tol)) continue;
            if (child.entryTime.evaluate(x) > tree.tauMax + tol) continue;
            bool ok = true;
            for (const auto& p : pending_rvs(tree.model, child.state)) {
                auto it = values.find(p.id);
                if (it != values.end() && it->second < p.lower.evaluate(x) - tol) ok = false;
            }
            if (!ok) continue;
            next = c;
            break;
        }
        if (next < 0) break;
        path.push_back(next);
        node = next;
        if (consumed) ++step;
    }
    return path;
}

SimEstimate estimate_probability(const Model& m, double tPrime, const Property& prop, const SimConfig& cfg,
                                 unsigned threads) {
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) throw RangeError("confidence must lie in (0, 1)");
    if (!(cfg.halfWidth > 0.0)) throw RangeError("half-width must be positive");
    const auto start = std::chrono::steady_clock::now();
    const double z = boost::math::quantile(boost::math::normal(), 0.5 * (1.0 + cfg.confidence));
    SimEstimate est;
    std::size_t hits = 0;
    std::size_t next = std::max<std::size_t>(cfg.minRuns, 1);
    while (est.runs < cfg.maxRuns) {
        const std::size_t n = std::min(next, cfg.maxRuns - est.runs);
        std::vector<char> ok(n, 0);
        const std::size_t base = est.runs;
        parallel_for(n, threads, [&](std::size_t i) {
            CounterRng rng(cfg.seed, base + i);
            const Trajectory run = simulate_run(m, tPrime, {}, &rng, cfg.maxEvents);
            ok[i] = holds(prop, run.marking, run.levels);
        });
        for (char c : ok) hits += std::size_t(c);
        est.runs += n;
        est.p = double(hits) / double(est.runs);
        est.halfWidth = z * std::sqrt(est.p * (1.0 - est.p) / double(est.runs));
        if (est.runs >= cfg.minRuns && est.halfWidth <= cfg.halfWidth) break;
        const double needed = z * z * std::max(est.p * (1.0 - est.p), 1e-4) / (cfg.halfWidth * cfg.halfWidth);
        const double more = std::max(needed - double(est.runs), double(cfg.minRuns));
        next = std::min<std::size_t>(cfg.batch, std::size_t(std::ceil(more)));
    }
    est.wallTimeMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return est;
}

}  // namespace hpng
