#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hpng/constraints.hpp"
#include "hpng/linear_form.hpp"
#include "hpng/model.hpp"

namespace hpng {

// Symbolic state at location entry. Forms are over the expired RVs.
struct SymState {
    std::vector<int> m;
    std::vector<LinearForm> x;
    std::vector<double> d;        // drift per continuous place
    std::vector<LinearForm> c;    // clock per deterministic transition
    std::vector<LinearForm> g;    // enabling time per general transition
    std::vector<char> e;          // enabled, per transition
    std::vector<double> rate;     // actual rate, continuous transitions
    std::vector<int> rv;          // firing ordinal of the pending RV, -1 if none
    std::vector<int> fired;       // RVs instantiated so far, per general transition
};

enum class EventKind { GuardArc, Boundary, Immediate, Deterministic, General };

std::string event_kind_name(EventKind k);

struct Event {
    EventKind kind = EventKind::Deterministic;
    int element = -1;        // transition, continuous place (boundary) or guard arc index
    LinearForm delta;        // remaining time
    int place = -1;          // boundary, guard: continuous place
    double level = 0.0;      // boundary, guard: level reached
};

// Rank of each kind among coincident events, lower wins. Defaults to
// guard < boundary < immediate < deterministic.
std::array<int, 4>& event_class_order();
int class_rank(EventKind k);

enum class Boundary { None, Lower, Upper };

struct Rates {
    std::vector<double> rate;   // per transition, 0 for discrete ones
    std::vector<double> drift;  // per continuous place
};

// Nominal rates of enabled continuous transitions reduced at boundary places
// by priority, then by share. Shared by the symbolic and concrete engines.
Rates rate_adaptation(const Model& m, const std::vector<char>& enabled,
                      const std::vector<Boundary>& status);

// Sign of `form` over the domain: -1, 0, +1; 0 means identically zero.
// Throws InvariantViolation if it changes sign.
int domain_sign(const LinearForm& form, const Piece& domain);

SymState initial_state(const Model& m);

// Recomputes enabling, rates and drift from m and x, then instantiates RVs of
// enabled general transitions that have none.
void settle(const Model& m, SymState& s, const Piece& domain);

bool enabled(const Model& m, const SymState& s, int transition, const Piece& domain);

std::vector<Event> next_events(const Model& m, const SymState& s, const Piece& domain);

struct MinEvents {
    std::vector<Event> det;  // E_det^min
    std::vector<Event> ran;  // E_ran^min
};

MinEvents min_det_events(const std::vector<Event>& events, const Piece& domain);

// Groups events with equal remaining time, preserving first appearance.
std::vector<std::vector<Event>> coincident_classes(const std::vector<Event>& det);

// Winners of a class of coincident events with their probabilities.
std::vector<std::pair<Event, double>> resolve_conflict(const Model& m, const std::vector<Event>& events);

struct PendingRv {
    RvId id;
    LinearForm lower;  // = enabling time so far
    bool enabled;
};

// Pending RVs in model order of their transitions.
std::vector<PendingRv> pending_rvs(const Model& m, const SymState& s);

}  // namespace hpng
