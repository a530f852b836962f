#include "dnf/lttg.hpp"

#include <sstream>

namespace dnf {

LttgMatrix LttgMatrix::compute(const ContactPlan& plan) {
    const int n = plan.node_count();
    std::vector<Tick> entries(static_cast<size_t>(n) * n, -1);
    for (int d = 0; d < n; ++d) entries[static_cast<size_t>(d) * n + d] = 0;

    // contacts bucketed by active tick, so the sweep is O(horizon + activity)
    const Tick horizon = plan.horizon();
    std::vector<std::vector<const Contact*>> active(static_cast<size_t>(horizon) + 1);
    for (const Contact& c : plan.contacts())
        for (Tick t = c.t_start; t <= c.t_end && t <= horizon; ++t)
            active[static_cast<size_t>(t)].push_back(&c);

    std::vector<char> visited(static_cast<size_t>(n));
    for (int dst = 0; dst < n; ++dst) {
        std::fill(visited.begin(), visited.end(), 0);
        visited[static_cast<size_t>(dst)] = 1;
        for (Tick t = horizon; t >= 0; --t) {
            // iterate to a fixpoint within the tick so that same-tick chains
            // (A->B and B->dst both active at t) are honored regardless of
            // contact order; required for the over-approximation guarantee
            bool changed = true;
            while (changed) {
                changed = false;
                for (const Contact* c : active[static_cast<size_t>(t)]) {
                    if (visited[static_cast<size_t>(c->dst)] &&
                        !visited[static_cast<size_t>(c->src)]) {
                        entries[static_cast<size_t>(dst) * n + c->src] = t;
                        visited[static_cast<size_t>(c->src)] = 1;
                        changed = true;
                    }
                }
            }
        }
    }
    return LttgMatrix(n, std::move(entries));
}

std::string LttgMatrix::to_csv() const {
    std::ostringstream os;
    for (int d = 0; d < n_; ++d) {
        for (int s = 0; s < n_; ++s) {
            if (s) os << ',';
            os << entry(d, s);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace dnf
