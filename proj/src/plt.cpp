#include "hpng/plt.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

#include "hpng/errors.hpp"

namespace hpng {

namespace {

void advance(const Model& m, SymState& s, const LinearForm& dt) {
    for (std::size_t p = 0; p < s.x.size(); ++p)
        if (s.d[p] != 0.0) s.x[p] += dt * s.d[p];
    for (std::size_t t = 0; t < m.transitions.size(); ++t) {
        if (!s.e[t]) continue;
        if (m.transitions[t].kind == TransitionKind::Deterministic) s.c[t] += dt;
        else if (m.transitions[t].kind == TransitionKind::General && s.rv[t] >= 0) s.g[t] += dt;
    }
}

void fire_tokens(const Model& m, SymState& s, int t) {
    for (const auto& in : m.inputs[t]) s.m[in.index] -= int(in.weight);
    for (const auto& out : m.outputs[t]) s.m[out.index] += int(out.weight);
}

ParametricLocation det_child(const Model& m, const ParametricLocation& parent, const Piece& piece,
                             const Event& ev, double p) {
    ParametricLocation c;
    c.order = parent.order;
    c.domain = piece;
    c.entryTime = parent.entryTime + ev.delta;
    c.conflictProb = p;
    c.source = ev;
    c.state = parent.state;
    advance(m, c.state, ev.delta);
    switch (ev.kind) {
        case EventKind::Immediate:
        case EventKind::Deterministic:
            fire_tokens(m, c.state, ev.element);
            c.state.c[ev.element] = LinearForm(0.0);
            break;
        case EventKind::Boundary:
        case EventKind::GuardArc:
            c.state.x[ev.place] = LinearForm(ev.level);
            break;
        case EventKind::General: break;
    }
    settle(m, c.state, c.domain);
    return c;
}

ParametricLocation random_child(const Model& m, const ParametricLocation& parent, const Piece& piece,
                                const Event& ev) {
    const int t = ev.element;
    ParametricLocation c;
    c.order = parent.order;
    c.order.push_back(RvId{t, parent.state.rv[t]});
    c.domain = piece;
    c.entryTime = parent.entryTime + ev.delta;
    c.source = ev;
    c.state = parent.state;
    advance(m, c.state, ev.delta);
    fire_tokens(m, c.state, t);
    c.state.rv[t] = -1;
    c.state.g[t] = LinearForm(0.0);
    settle(m, c.state, c.domain);
    return c;
}

}  // namespace

std::vector<Piece> set_expired_rv_bounds(const Piece& domain, std::size_t n, const LinearForm& dtc,
                                         const std::vector<LinearForm>& dtSet,
                                         const std::vector<LinearForm>& extra) {
    const double tol = tolerances().eps;
    std::vector<LinearForm> cons = piece_constraints(domain);
    cons.insert(cons.end(), extra.begin(), extra.end());
    for (const auto& dt : dtSet) {
        if (dt.approx_equal(dtc, tol)) continue;
        const ComparisonOutcome o = compare_remaining_times(dtc, dt);
        switch (o.kind) {
            case ComparisonOutcome::Kind::Equal:
            case ComparisonOutcome::Kind::AlwaysMinimal: break;
            case ComparisonOutcome::Kind::NeverMinimal: return {};
            case ComparisonOutcome::Kind::UpperBound:
                cons.push_back(o.bound - LinearForm::variable(o.k));
                break;
            case ComparisonOutcome::Kind::LowerBound:
                cons.push_back(LinearForm::variable(o.k) - o.bound);
                break;
        }
    }
    return decompose(cons, n);
}

std::vector<ParametricLocation> schedule_children(const Model& m, const ParametricLocation& parent) {
    const std::size_t n = parent.order.size();
    const auto events = next_events(m, parent.state, parent.domain);
    const MinEvents me = min_det_events(events, parent.domain);
    const auto classes = coincident_classes(me.det);
    std::vector<ParametricLocation> out;

    if (classes.empty()) {
        for (const Event& r : me.ran) {
            const LinearForm lower = LinearForm::variable(n) - parent.state.g[r.element];
            for (const Piece& piece : set_expired_rv_bounds(parent.domain, n + 1, r.delta, {}, {lower}))
                out.push_back(random_child(m, parent, piece, r));
        }
        return out;
    }
    std::vector<LinearForm> reps;
    for (const auto& cls : classes) reps.push_back(cls.front().delta);
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        const LinearForm& dt = reps[ci];
        const auto winners = resolve_conflict(m, classes[ci]);
        for (const Piece& piece : set_expired_rv_bounds(parent.domain, n, dt, reps))
            for (const auto& [ev, p] : winners) out.push_back(det_child(m, parent, piece, ev, p));

        // This class is the earliest deterministic context; the RV fires before it.
        std::vector<LinearForm> ctx;
        for (std::size_t cj = 0; cj < classes.size(); ++cj)
            if (cj != ci) ctx.push_back(reps[cj] - dt);
        for (const Event& r : me.ran) {
            std::vector<LinearForm> extra = ctx;
            extra.push_back(LinearForm::variable(n) - parent.state.g[r.element]);
            for (const Piece& piece : set_expired_rv_bounds(parent.domain, n + 1, r.delta, {dt}, extra))
                out.push_back(random_child(m, parent, piece, r));
        }
    }
    return out;
}

ExtendedReal min_entry_time(const ParametricLocation& loc) {
    return extremal_value(loc.entryTime, loc.domain, Sense::Min);
}

ExtendedReal max_entry_time(const ParametricLocation& loc) {
    return extremal_value(loc.entryTime, loc.domain, Sense::Max);
}

ExtendedReal max_exit_time(const PLTree& tree, int id) {
    const auto& loc = tree.nodes.at(id);
    if (loc.children.empty()) return {ExtendedReal::Kind::Finite, tree.tauMax};
    ExtendedReal best{ExtendedReal::Kind::MinusInf, 0.0};
    for (int c : loc.children) {
        const ExtendedReal e = max_entry_time(tree.nodes[c]);
        if (e.is_plus_inf()) return e;
        if (best.is_minus_inf() || (e.finite() && e.value > best.value)) best = e;
    }
    return best;
}

PLTree build_plt(const Model& m, double tauMax, std::size_t maxNodes) {
    if (!(tauMax > 0)) throw RangeError("tauMax must be positive");
    const double tol = tolerances().eps;
    PLTree tree;
    tree.model = m;
    tree.tauMax = tauMax;
    ParametricLocation root;
    root.state = initial_state(m);
    root.entryTime = LinearForm(0.0);
    tree.nodes.push_back(std::move(root));
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const ExtendedReal lo = min_entry_time(tree.nodes[i]);
        if (!lo.finite() || lo.value > tauMax + tol) continue;
        auto kids = schedule_children(m, tree.nodes[i]);
        {
            auto& node = tree.nodes[i];
            node.exitEvents = min_det_events(next_events(m, node.state, node.domain), node.domain).det;
            node.expanded = true;
        }
        for (auto& k : kids) {
            if (tree.nodes.size() >= maxNodes) {
                std::ostringstream os;
                os << "node budget of " << maxNodes << " exceeded; frontier:";
                for (std::size_t f = i; f < tree.nodes.size() && f < i + 20; ++f) os << ' ' << f;
                throw ResourceError(os.str());
            }
            k.id = int(tree.nodes.size());
            k.parent = int(i);
            tree.nodes[i].children.push_back(k.id);
            tree.nodes.push_back(std::move(k));
        }
    }
    return tree;
}

std::string rv_name(const Model& m, RvId id) {
    int gi = 0;
    for (int t = 0; t < id.transition; ++t)
        if (m.transitions[t].kind == TransitionKind::General) ++gi;
    return "s" + std::to_string(gi) + "^" + std::to_string(id.firing);
}

std::vector<std::string> variable_names(const Model& m, const std::vector<RvId>& order) {
    std::vector<std::string> names;
    for (const auto& id : order) names.push_back(rv_name(m, id));
    return names;
}

std::vector<DomainEntry> potential_domain(const Model& m, const ParametricLocation& loc) {
    std::vector<DomainEntry> out;
    for (std::size_t k = 0; k < loc.order.size(); ++k) out.push_back({loc.order[k], loc.domain[k], true});
    for (const auto& p : pending_rvs(m, loc.state)) out.push_back({p.id, SymInterval{p.lower, std::nullopt}, false});
    return out;
}

std::string event_label(const Model& m, const Event& ev) {
    switch (ev.kind) {
        case EventKind::Immediate:
        case EventKind::Deterministic:
        case EventKind::General: return m.transitions[ev.element].id;
        case EventKind::Boundary:
            return m.cplaces[ev.place].id + (ev.level == 0.0 ? " empty" : " full");
        case EventKind::GuardArc: {
            const Arc& a = m.arcs[ev.element];
            return "x(" + m.cplaces[ev.place].id + ") " + op_symbol(a.op) + " " + format_number(a.threshold);
        }
    }
    return "?";
}

std::string to_dot(const PLTree& tree) {
    std::ostringstream os;
    os << "digraph plt {\n  node [shape=box];\n";
    for (const auto& n : tree.nodes) {
        const auto names = variable_names(tree.model, n.order);
        os << "  n" << n.id << " [label=\"" << n.id << ", t=" << n.entryTime.to_string(names)
           << ", p=" << format_number(n.conflictProb) << "\"];\n";
    }
    for (const auto& n : tree.nodes)
        for (int c : n.children)
            os << "  n" << n.id << " -> n" << c << " [label=\""
               << event_label(tree.model, *tree.nodes[c].source) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string to_json(const PLTree& tree) {
    using ojson = nlohmann::ordered_json;
    const Model& m = tree.model;
    ojson root;
    root["tauMax"] = tree.tauMax;
    root["locations"] = tree.nodes.size();
    ojson nodes = ojson::array();
    for (const auto& n : tree.nodes) {
        const auto names = variable_names(m, n.order);
        ojson j;
        j["id"] = n.id;
        j["parent"] = n.parent;
        j["children"] = n.children;
        j["entryTime"] = n.entryTime.to_string(names);
        j["conflictProb"] = n.conflictProb;
        if (n.source) {
            j["source"] = {{"kind", event_kind_name(n.source->kind)}, {"element", event_label(m, *n.source)}};
        } else {
            j["source"] = nullptr;
        }
        ojson dom = ojson::array();
        for (const auto& d : potential_domain(m, n))
            dom.push_back({{"rv", rv_name(m, d.id)}, {"interval", d.interval.to_string(names)}, {"expired", d.expired}});
        j["domain"] = dom;
        j["firingOrder"] = names;
        ojson marking = ojson::object();
        for (std::size_t p = 0; p < m.dplaces.size(); ++p) marking[m.dplaces[p].id] = n.state.m[p];
        j["marking"] = marking;
        ojson levels = ojson::object(), drift = ojson::object();
        for (std::size_t p = 0; p < m.cplaces.size(); ++p) {
            levels[m.cplaces[p].id] = n.state.x[p].to_string(names);
            drift[m.cplaces[p].id] = n.state.d[p];
        }
        j["levels"] = levels;
        j["drift"] = drift;
        j["expanded"] = n.expanded;
        nodes.push_back(j);
    }
    root["nodes"] = nodes;
    return root.dump(2) + "\n";
}

}  // namespace hpng
