#include "dnf/baselines.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace dnf {

namespace {

struct Label {
    Tick arrival = std::numeric_limits<Tick>::max();
    std::vector<int> hops;

    bool better_than(const Label& o) const {
        if (arrival != o.arrival) return arrival < o.arrival;
        if (hops.size() != o.hops.size()) return hops.size() < o.hops.size();
        return hops < o.hops;
    }
};

}  // namespace

std::optional<Route> cgr_best_route(const ContactPlan& plan, NodeId src, Tick t,
                                    NodeId dst) {
    const int n = plan.node_count();
    std::vector<Label> labels(static_cast<size_t>(n));
    std::vector<char> settled(static_cast<size_t>(n), 0);
    labels[static_cast<size_t>(src)] = Label{t, {}};

    for (;;) {
        int u = -1;
        for (int v = 0; v < n; ++v) {
            if (settled[static_cast<size_t>(v)]) continue;
            if (labels[static_cast<size_t>(v)].arrival == std::numeric_limits<Tick>::max())
                continue;
            if (u == -1 || labels[static_cast<size_t>(v)].better_than(labels[static_cast<size_t>(u)]))
                u = v;
        }
        if (u == -1) break;
        settled[static_cast<size_t>(u)] = 1;
        if (u == dst) break;
        const Label& lu = labels[static_cast<size_t>(u)];
        for (const Contact& c : plan.contacts()) {
            if (c.src != u) continue;
            const Tick departure = std::max(lu.arrival, c.t_start);
            if (departure > c.t_end) continue;
            Label cand;
            cand.arrival = departure + c.t_prop;
            cand.hops = lu.hops;
            cand.hops.push_back(c.id);
            Label& lv = labels[static_cast<size_t>(c.dst)];
            if (!settled[static_cast<size_t>(c.dst)] && cand.better_than(lv)) lv = std::move(cand);
        }
    }

    const Label& ld = labels[static_cast<size_t>(dst)];
    if (ld.arrival == std::numeric_limits<Tick>::max()) return std::nullopt;
    return Route{ld.hops, ld.arrival};
}

}  // namespace dnf
