#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnf {

using Tick = std::int64_t;
using NodeId = int;

/// A unidirectional scheduled transmission opportunity. The availability
/// window [t_start, t_end] is closed on both ends.
struct Contact {
    int id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    Tick t_start = 0;
    Tick t_end = 0;
    Tick t_prop = 0;
};

class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable set of scheduled contacts plus the node universe they refer to.
/// Contacts are kept sorted by id; all queries are read-only.
class ContactPlan {
public:
    ContactPlan(int node_count, std::vector<Contact> contacts,
                std::optional<Tick> horizon_override = std::nullopt);

    int node_count() const { return node_count_; }
    Tick horizon() const { return horizon_; }
    const std::vector<Contact>& contacts() const { return contacts_; }

    const Contact& contact_by_id(int id) const;
    const Contact* find_contact(int id) const;

    /// All contacts with t_start <= t <= t_end.
    std::vector<Contact> contacts_at_time(Tick t) const;

    /// Contacts departing from `node` whose window has not yet closed
    /// (t_end >= t): currently open or still in the future.
    std::vector<Contact> schedulable_contacts(NodeId node, Tick t) const;

    std::string serialize() const;

    static ContactPlan parse(const std::string& text);

    /// Random benchmark plan: `bidirectional_contacts` uniform node pairs,
    /// each materialized as two mirrored unidirectional contacts sharing a
    /// uniformly placed window of length `contact_duration`.
    static ContactPlan generate(int node_count, int bidirectional_contacts,
                                Tick horizon, Tick contact_duration,
                                Tick t_prop, std::uint64_t seed);

    bool operator==(const ContactPlan& other) const;

private:
    int node_count_;
    std::vector<Contact> contacts_;
    Tick horizon_;
};

}  // namespace dnf
