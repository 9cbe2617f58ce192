#include "hpng/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hpng/errors.hpp"

namespace hpng {

std::string event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::GuardArc: return "guard";
        case EventKind::Boundary: return "boundary";
        case EventKind::Immediate: return "immediate";
        case EventKind::Deterministic: return "deterministic";
        case EventKind::General: return "general";
    }
    return "?";
}

std::array<int, 4>& event_class_order() {
    static std::array<int, 4> order{0, 1, 2, 3};
    return order;
}

int class_rank(EventKind k) {
    if (k == EventKind::General) return 4;
    return event_class_order()[static_cast<int>(k)];
}

namespace {

struct Claim {
    int t;
    double w;
};

// Distributes `avail` units of w*rate over the claims: priority groups in
// descending order, water filling by share inside a group.
void allocate(const Model& m, double avail, const std::vector<Claim>& claims,
              std::vector<double>& act) {
    std::vector<Claim> sorted = claims;
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Claim& a, const Claim& b) {
        return m.transitions[a.t].priority > m.transitions[b.t].priority;
    });
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        const int prio = m.transitions[sorted[i].t].priority;
        while (j < sorted.size() && m.transitions[sorted[j].t].priority == prio) ++j;
        double demand = 0.0;
        for (std::size_t k = i; k < j; ++k) demand += sorted[k].w * act[sorted[k].t];
        if (demand <= avail) {
            avail -= demand;
        } else {
            std::vector<Claim> grp(sorted.begin() + long(i), sorted.begin() + long(j));
            auto ratio = [&](const Claim& c) { return act[c.t] / m.transitions[c.t].share; };
            std::sort(grp.begin(), grp.end(), [&](const Claim& a, const Claim& b) { return ratio(a) < ratio(b); });
            double rem = std::max(avail, 0.0);
            double wshare = 0.0;
            for (const auto& c : grp) wshare += c.w * m.transitions[c.t].share;
            std::size_t k = 0;
            for (; k < grp.size(); ++k) {
                const double lambda = wshare > 0 ? rem / wshare : 0.0;
                if (ratio(grp[k]) > lambda) break;
                rem -= grp[k].w * act[grp[k].t];
                wshare -= grp[k].w * m.transitions[grp[k].t].share;
            }
            const double lambda = wshare > 0 ? std::max(rem, 0.0) / wshare : 0.0;
            for (; k < grp.size(); ++k) act[grp[k].t] = lambda * m.transitions[grp[k].t].share;
            avail = 0.0;
        }
        i = j;
    }
}

double dynamic_nominal(const Transition& t, const std::vector<double>& act) {
    double v = t.constant;
    for (const auto& term : t.terms) v += term.coefficient * act[term.transition];
    return std::max(v, 0.0);
}

}  // namespace

Rates rate_adaptation(const Model& m, const std::vector<char>& en, const std::vector<Boundary>& status) {
    const std::size_t nt = m.transitions.size();
    const double tol = tolerances().eps;
    Rates r;
    r.rate.assign(nt, 0.0);
    std::vector<double> statics(nt, 0.0);
    for (std::size_t t = 0; t < nt; ++t)
        if (en[t] && m.transitions[t].kind == TransitionKind::StaticContinuous) statics[t] = m.transitions[t].rate;

    for (int outer = 0; outer < 50; ++outer) {
        std::vector<double> act(nt, 0.0);
        for (std::size_t t = 0; t < nt; ++t) {
            if (!en[t]) continue;
            if (m.transitions[t].kind == TransitionKind::StaticContinuous) act[t] = m.transitions[t].rate;
            else if (m.transitions[t].kind == TransitionKind::DynamicContinuous)
                act[t] = dynamic_nominal(m.transitions[t], statics);
        }
        for (int inner = 0; inner < 1000; ++inner) {
            bool changed = false;
            for (std::size_t p = 0; p < m.cplaces.size(); ++p) {
                if (status[p] == Boundary::None) continue;
                double in = 0.0, out = 0.0;
                for (const auto& f : m.inflow[p]) in += f.weight * act[f.index];
                for (const auto& f : m.outflow[p]) out += f.weight * act[f.index];
                const bool lower = status[p] == Boundary::Lower;
                if (lower ? out <= in + tol : in <= out + tol) continue;
                std::vector<Claim> claims;
                for (const auto& f : lower ? m.outflow[p] : m.inflow[p]) claims.push_back({f.index, f.weight});
                std::vector<double> next = act;
                allocate(m, lower ? in : out, claims, next);
                for (std::size_t t = 0; t < nt; ++t) {
                    if (next[t] < act[t] - 1e-15) {
                        act[t] = next[t];
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        bool stable = true;
        for (std::size_t t = 0; t < nt; ++t)
            if (m.transitions[t].kind == TransitionKind::StaticContinuous && std::abs(act[t] - statics[t]) > 1e-12) {
                stable = false;
                statics[t] = act[t];
            }
        r.rate = act;
        if (stable) break;
    }
    r.drift.assign(m.cplaces.size(), 0.0);
    for (std::size_t p = 0; p < m.cplaces.size(); ++p) {
        double d = 0.0;
        for (const auto& f : m.inflow[p]) d += f.weight * r.rate[f.index];
        for (const auto& f : m.outflow[p]) d -= f.weight * r.rate[f.index];
        r.drift[p] = std::abs(d) <= tol ? 0.0 : d;
    }
    return r;
}

int domain_sign(const LinearForm& form, const Piece& domain) {
    const double tol = tolerances().eps;
    const double lo = extremal_value(form, domain, Sense::Min).as_double();
    const double hi = extremal_value(form, domain, Sense::Max).as_double();
    if (lo >= -tol && hi <= tol) return 0;
    if (lo >= -tol) return 1;
    if (hi <= tol) return -1;
    throw InvariantViolation("sign of " + form.to_string() + " varies over the domain");
}

namespace {

bool guards_hold(const Model& m, const SymState& s, int t, const Piece& domain) {
    for (const auto& g : m.guards[t]) {
        if (!g.continuousPlace) {
            if (!compare(double(s.m[g.place]), g.op, g.threshold)) return false;
            continue;
        }
        if (m.transitions[t].continuous()) continue;  // rejected by validate
        int sign = domain_sign(s.x[g.place] - LinearForm(g.threshold), domain);
        if (sign == 0) sign = s.d[g.place] > 0 ? 1 : (s.d[g.place] < 0 ? -1 : 0);
        if (!compare(double(sign), g.op, 0.0)) return false;
    }
    return true;
}

bool tokens_suffice(const Model& m, const SymState& s, int t) {
    for (const auto& in : m.inputs[t])
        if (s.m[in.index] < in.weight) return false;
    return true;
}

}  // namespace

bool enabled(const Model& m, const SymState& s, int t, const Piece& domain) {
    if (m.transitions[t].discrete() && !tokens_suffice(m, s, t)) return false;
    return guards_hold(m, s, t, domain);
}

void settle(const Model& m, SymState& s, const Piece& domain) {
    const std::size_t nt = m.transitions.size();
    const double tol = tolerances().eps;
    s.e.assign(nt, 0);
    for (std::size_t t = 0; t < nt; ++t)
        if (m.transitions[t].continuous()) s.e[t] = guards_hold(m, s, int(t), domain);
    std::vector<Boundary> status(m.cplaces.size(), Boundary::None);
    for (std::size_t p = 0; p < m.cplaces.size(); ++p) {
        const double hi = extremal_value(s.x[p], domain, Sense::Max).as_double();
        const double lo = extremal_value(s.x[p], domain, Sense::Min).as_double();
        if (hi <= tol) status[p] = Boundary::Lower;
        else if (std::isfinite(m.cplaces[p].capacity) && lo >= m.cplaces[p].capacity - tol)
            status[p] = Boundary::Upper;
    }
    Rates r = rate_adaptation(m, s.e, status);
    s.rate = std::move(r.rate);
    s.d = std::move(r.drift);
    for (std::size_t t = 0; t < nt; ++t)
        if (m.transitions[t].discrete()) s.e[t] = enabled(m, s, int(t), domain);
    for (std::size_t t = 0; t < nt; ++t) {
        if (m.transitions[t].kind != TransitionKind::General) continue;
        if (s.e[t] && s.rv[t] < 0) {
            s.rv[t] = s.fired[t]++;
            s.g[t] = LinearForm(0.0);
        }
    }
}

SymState initial_state(const Model& m) {
    SymState s;
    for (const auto& p : m.dplaces) s.m.push_back(p.tokens);
    for (const auto& p : m.cplaces) s.x.emplace_back(p.level);
    const std::size_t nt = m.transitions.size();
    s.c.assign(nt, LinearForm(0.0));
    s.g.assign(nt, LinearForm(0.0));
    s.rv.assign(nt, -1);
    s.fired.assign(nt, 0);
    s.d.assign(m.cplaces.size(), 0.0);
    settle(m, s, Piece{});
    return s;
}

std::vector<Event> next_events(const Model& m, const SymState& s, const Piece& domain) {
    const double tol = tolerances().eps;
    const std::size_t n = domain.size();
    std::vector<Event> out;
    auto keep = [&](const Event& ev) {
        return extremal_value(ev.delta, domain, Sense::Max).as_double() >= -tol;
    };
    for (std::size_t t = 0; t < m.transitions.size(); ++t) {
        if (!s.e[t]) continue;
        const Transition& tr = m.transitions[t];
        Event ev;
        ev.element = int(t);
        switch (tr.kind) {
            case TransitionKind::Immediate:
                ev.kind = EventKind::Immediate;
                ev.delta = LinearForm(0.0);
                out.push_back(ev);
                break;
            case TransitionKind::Deterministic:
                ev.kind = EventKind::Deterministic;
                ev.delta = LinearForm(tr.firingTime) - s.c[t];
                if (keep(ev)) out.push_back(ev);
                break;
            case TransitionKind::General:
                // The pending RV takes the next firing-order position.
                ev.kind = EventKind::General;
                ev.delta = LinearForm::variable(n) - s.g[t];
                out.push_back(ev);
                break;
            default: break;
        }
    }
    for (std::size_t p = 0; p < m.cplaces.size(); ++p) {
        const double d = s.d[p];
        if (std::abs(d) <= tol) continue;
        Event ev;
        ev.kind = EventKind::Boundary;
        ev.element = int(p);
        ev.place = int(p);
        if (d < 0) {
            ev.level = 0.0;
            ev.delta = s.x[p] / (-d);
        } else {
            if (!std::isfinite(m.cplaces[p].capacity)) continue;
            ev.level = m.cplaces[p].capacity;
            ev.delta = (LinearForm(m.cplaces[p].capacity) - s.x[p]) / d;
        }
        if (keep(ev)) out.push_back(ev);
    }
    for (std::size_t i = 0; i < m.arcs.size(); ++i) {
        const Arc& a = m.arcs[i];
        if (a.kind != ArcKind::Guard || a.from.type != NodeRef::Type::ContinuousPlace) continue;
        if (a.to.type != NodeRef::Type::Transition || !m.transitions[a.to.index].discrete()) continue;
        const int p = a.from.index;
        const double d = s.d[p];
        if (std::abs(d) <= tol) continue;
        Event ev;
        ev.kind = EventKind::GuardArc;
        ev.element = int(i);
        ev.place = p;
        ev.level = a.threshold;
        ev.delta = (LinearForm(a.threshold) - s.x[p]) / d;
        if (extremal_value(ev.delta, domain, Sense::Max).as_double() > tol) out.push_back(ev);
    }
    return out;
}

MinEvents min_det_events(const std::vector<Event>& events, const Piece& domain) {
    const double tol = tolerances().eps;
    MinEvents r;
    std::vector<const Event*> det;
    for (const auto& ev : events) {
        if (ev.kind == EventKind::General) r.ran.push_back(ev);
        else det.push_back(&ev);
    }
    for (const Event* f : det) {
        bool dominated = false;
        for (const Event* e : det) {
            if (e == f || e->delta.approx_equal(f->delta, tol)) continue;
            const ExtendedReal gap = extremal_value(e->delta - f->delta, domain, Sense::Max);
            if (gap.finite() && gap.value <= tol) {
                dominated = true;
                break;
            }
            if (gap.is_minus_inf()) {
                dominated = true;
                break;
            }
        }
        if (!dominated) r.det.push_back(*f);
    }
    return r;
}

std::vector<std::vector<Event>> coincident_classes(const std::vector<Event>& det) {
    const double tol = tolerances().eps;
    std::vector<std::vector<Event>> classes;
    for (const auto& ev : det) {
        bool placed = false;
        for (auto& cls : classes)
            if (cls.front().delta.approx_equal(ev.delta, tol)) {
                cls.push_back(ev);
                placed = true;
                break;
            }
        if (!placed) classes.push_back({ev});
    }
    return classes;
}

std::vector<std::pair<Event, double>> resolve_conflict(const Model& m, const std::vector<Event>& events) {
    if (events.empty()) return {};
    int best = class_rank(events.front().kind);
    for (const auto& ev : events) best = std::min(best, class_rank(ev.kind));
    std::vector<Event> cls;
    for (const auto& ev : events)
        if (class_rank(ev.kind) == best) cls.push_back(ev);
    const EventKind kind = cls.front().kind;
    if (kind == EventKind::GuardArc || kind == EventKind::Boundary) {
        auto it = std::min_element(cls.begin(), cls.end(),
                                   [](const Event& a, const Event& b) { return a.element < b.element; });
        return {{*it, 1.0}};
    }
    int prio = m.transitions[cls.front().element].priority;
    for (const auto& ev : cls) prio = std::max(prio, m.transitions[ev.element].priority);
    std::vector<Event> top;
    double total = 0.0;
    for (const auto& ev : cls)
        if (m.transitions[ev.element].priority == prio) {
            top.push_back(ev);
            total += m.transitions[ev.element].weight;
        }
    if (!(total > 0.0)) throw ConflictError("conflicting transitions have zero total weight");
    std::vector<std::pair<Event, double>> out;
    for (const auto& ev : top) out.emplace_back(ev, m.transitions[ev.element].weight / total);
    return out;
}

std::vector<PendingRv> pending_rvs(const Model& m, const SymState& s) {
    std::vector<PendingRv> out;
    for (std::size_t t = 0; t < m.transitions.size(); ++t)
        if (m.transitions[t].kind == TransitionKind::General && s.rv[t] >= 0)
            out.push_back({RvId{int(t), s.rv[t]}, s.g[t], bool(s.e[t])});
    return out;
}

}  // namespace hpng
