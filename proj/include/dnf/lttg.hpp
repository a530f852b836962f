#pragma once

#include <string>
#include <vector>

#include "dnf/contact_plan.hpp"

namespace dnf {

/// Latest-time-to-goal matrix: entry(dst, src) is the latest tick at which
/// dst is still reachable from src, -1 if never, 0 on the diagonal. Delay-free
/// backwards sweep over the contact plan, so a safe over-approximation of true
/// (delay-aware) reachability.
class LttgMatrix {
public:
    static LttgMatrix compute(const ContactPlan& plan);

    int node_count() const { return n_; }
    Tick entry(NodeId dst, NodeId src) const {
        return entries_[static_cast<size_t>(dst) * n_ + static_cast<size_t>(src)];
    }

    /// True iff src = dst, or the matrix still allows reaching dst from src
    /// at time t.
    bool reachable(NodeId src, NodeId dst, Tick t) const {
        if (src == dst) return true;
        const Tick e = entry(dst, src);
        return e != -1 && t <= e;
    }

    /// CSV dump, one row per destination node.
    std::string to_csv() const;

private:
    LttgMatrix(int n, std::vector<Tick> entries)
        : n_(n), entries_(std::move(entries)) {}

    int n_;
    std::vector<Tick> entries_;
};

}  // namespace dnf
