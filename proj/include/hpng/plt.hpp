#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hpng/constraints.hpp"
#include "hpng/model.hpp"
#include "hpng/semantics.hpp"

namespace hpng {

struct ParametricLocation {
    int id = 0;
    int parent = -1;
    std::vector<int> children;
    LinearForm entryTime;
    double conflictProb = 1.0;
    SymState state;
    Piece domain;                    // expired RVs, indexed like `order`
    std::vector<RvId> order;         // firing order
    std::optional<Event> source;     // none for the root
    std::vector<Event> exitEvents;   // E_det^min, filled on expansion
    bool expanded = false;
};

struct PLTree {
    Model model;
    double tauMax = 0.0;
    std::vector<ParametricLocation> nodes;
};

inline constexpr std::size_t kDefaultNodeCap = 1000000;

PLTree build_plt(const Model& m, double tauMax, std::size_t maxNodes = kDefaultNodeCap);

std::vector<ParametricLocation> schedule_children(const Model& m, const ParametricLocation& parent);

// Pieces of `domain` (n variables) on which dtc <= every form in dtSet, from the
// pairwise bounds of compare_remaining_times. `extra` holds further forms >= 0.
std::vector<Piece> set_expired_rv_bounds(const Piece& domain, std::size_t n, const LinearForm& dtc,
                                         const std::vector<LinearForm>& dtSet,
                                         const std::vector<LinearForm>& extra = {});

ExtendedReal min_entry_time(const ParametricLocation& loc);
ExtendedReal max_entry_time(const ParametricLocation& loc);
// Latest max entry over the children; leaves exit at tauMax.
ExtendedReal max_exit_time(const PLTree& tree, int id);

// Display name of an RV, "s<i>^<j>" with i the index among general transitions.
std::string rv_name(const Model& m, RvId id);
std::vector<std::string> variable_names(const Model& m, const std::vector<RvId>& order);

struct DomainEntry {
    RvId id;
    SymInterval interval;
    bool expired;
};

// Expired intervals from the piece, pending ones as [enabling time, inf].
std::vector<DomainEntry> potential_domain(const Model& m, const ParametricLocation& loc);

std::string event_label(const Model& m, const Event& ev);

std::string to_dot(const PLTree& tree);
std::string to_json(const PLTree& tree);

}  // namespace hpng
