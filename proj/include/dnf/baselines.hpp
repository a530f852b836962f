#pragma once

#include <optional>
#include <vector>

#include "dnf/contact_plan.hpp"

namespace dnf {

/// A feasible chain of contacts from a source node to a destination, with the
/// earliest arrival tick assuming every hop succeeds.
struct Route {
    std::vector<int> hops;  // contact ids, in order
    Tick delivery_time = 0;
};

/// Earliest-delivery route over the contact graph from (src, t) to dst:
/// Dijkstra with labels (arrival, hop count, contact-id sequence), departure
/// at max(arrival at hop source, t_start), feasible while departure <= t_end.
/// Ties break toward fewer hops, then the lexicographically lowest id
/// sequence. Empty when src = dst (delivery at t) or absent when no route.
std::optional<Route> cgr_best_route(const ContactPlan& plan, NodeId src, Tick t,
                                    NodeId dst);

enum class CgrMode { Plain, Custody };

}  // namespace dnf
