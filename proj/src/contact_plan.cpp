#include "dnf/contact_plan.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_set>

namespace dnf {

namespace {

void validate_contact(const Contact& c, int node_count, const std::string& where) {
    if (c.id < 0)
        throw PlanError(where + ": negative contact id " + std::to_string(c.id));
    if (c.src == c.dst)
        throw PlanError(where + ": contact " + std::to_string(c.id) + " has src = dst");
    if (c.src < 0 || c.src >= node_count || c.dst < 0 || c.dst >= node_count)
        throw PlanError(where + ": contact " + std::to_string(c.id) + " references node out of range");
    if (c.t_start > c.t_end)
        throw PlanError(where + ": contact " + std::to_string(c.id) + " has t_start > t_end");
    if (c.t_start < 0)
        throw PlanError(where + ": contact " + std::to_string(c.id) + " has negative t_start");
    if (c.t_prop < 0)
        throw PlanError(where + ": contact " + std::to_string(c.id) + " has negative t_prop");
}

}  // namespace

ContactPlan::ContactPlan(int node_count, std::vector<Contact> contacts,
                         std::optional<Tick> horizon_override)
    : node_count_(node_count), contacts_(std::move(contacts)) {
    if (node_count_ <= 0)
        throw PlanError("node_count must be positive");
    std::unordered_set<int> ids;
    for (const Contact& c : contacts_) {
        validate_contact(c, node_count_, "plan");
        if (!ids.insert(c.id).second)
            throw PlanError("duplicate contact id " + std::to_string(c.id));
    }
    std::sort(contacts_.begin(), contacts_.end(),
              [](const Contact& a, const Contact& b) { return a.id < b.id; });
    Tick max_end = 0;
    for (const Contact& c : contacts_) max_end = std::max(max_end, c.t_end);
    horizon_ = horizon_override.value_or(max_end);
    if (horizon_ < max_end)
        throw PlanError("horizon override smaller than latest contact end");
}

const Contact* ContactPlan::find_contact(int id) const {
    auto it = std::lower_bound(contacts_.begin(), contacts_.end(), id,
                               [](const Contact& c, int v) { return c.id < v; });
    if (it == contacts_.end() || it->id != id) return nullptr;
    return &*it;
}

const Contact& ContactPlan::contact_by_id(int id) const {
    const Contact* c = find_contact(id);
    if (!c) throw PlanError("unknown contact id " + std::to_string(id));
    return *c;
}

std::vector<Contact> ContactPlan::contacts_at_time(Tick t) const {
    std::vector<Contact> out;
    for (const Contact& c : contacts_)
        if (c.t_start <= t && t <= c.t_end) out.push_back(c);
    return out;
}

std::vector<Contact> ContactPlan::schedulable_contacts(NodeId node, Tick t) const {
    std::vector<Contact> out;
    for (const Contact& c : contacts_)
        if (c.src == node && c.t_end >= t) out.push_back(c);
    return out;
}

std::string ContactPlan::serialize() const {
    std::ostringstream os;
    os << "nodes," << node_count_ << "\n";
    Tick max_end = 0;
    for (const Contact& c : contacts_) max_end = std::max(max_end, c.t_end);
    if (horizon_ != max_end) os << "horizon," << horizon_ << "\n";
    for (const Contact& c : contacts_)
        os << c.id << ',' << c.src << ',' << c.dst << ',' << c.t_start << ','
           << c.t_end << ',' << c.t_prop << "\n";
    return os.str();
}

ContactPlan ContactPlan::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    int node_count = -1;
    std::optional<Tick> horizon;
    std::vector<Contact> contacts;
    while (std::getline(is, line)) {
        ++line_no;
        // strip trailing CR and whitespace-only lines
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string where = "line " + std::to_string(line_no);
        if (node_count < 0) {
            if (line.rfind("nodes,", 0) != 0)
                throw PlanError(where + ": expected header 'nodes,<N>'");
            try {
                node_count = std::stoi(line.substr(6));
            } catch (const std::exception&) {
                throw PlanError(where + ": bad node count");
            }
            if (node_count <= 0) throw PlanError(where + ": node count must be positive");
            continue;
        }
        if (line.rfind("horizon,", 0) == 0) {
            if (horizon || !contacts.empty())
                throw PlanError(where + ": misplaced horizon line");
            try {
                horizon = std::stoll(line.substr(8));
            } catch (const std::exception&) {
                throw PlanError(where + ": bad horizon");
            }
            continue;
        }
        std::array<Tick, 6> f{};
        std::istringstream ls(line);
        std::string tok;
        size_t i = 0;
        while (std::getline(ls, tok, ',')) {
            if (i >= f.size()) throw PlanError(where + ": too many fields");
            try {
                f[i] = std::stoll(tok);
            } catch (const std::exception&) {
                throw PlanError(where + ": bad integer field '" + tok + "'");
            }
            ++i;
        }
        if (i != 6) throw PlanError(where + ": expected 6 fields, got " + std::to_string(i));
        Contact c{static_cast<int>(f[0]), static_cast<NodeId>(f[1]), static_cast<NodeId>(f[2]),
                  f[3], f[4], f[5]};
        validate_contact(c, node_count, where);
        contacts.push_back(c);
    }
    if (node_count < 0) throw PlanError("missing 'nodes,<N>' header");
    try {
        return ContactPlan(node_count, std::move(contacts), horizon);
    } catch (const PlanError& e) {
        throw PlanError(std::string("plan validation: ") + e.what());
    }
}

ContactPlan ContactPlan::generate(int node_count, int bidirectional_contacts,
                                  Tick horizon, Tick contact_duration,
                                  Tick t_prop, std::uint64_t seed) {
    if (node_count < 2) throw std::invalid_argument("generate_plan: node_count must be >= 2");
    if (bidirectional_contacts < 0)
        throw std::invalid_argument("generate_plan: negative contact count");
    if (contact_duration > horizon)
        throw std::invalid_argument("generate_plan: contact_duration exceeds horizon");
    if (contact_duration < 0 || t_prop < 0)
        throw std::invalid_argument("generate_plan: negative duration or delay");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_a(0, node_count - 1);
    std::uniform_int_distribution<int> pick_b(0, node_count - 2);
    std::uniform_int_distribution<Tick> pick_start(0, horizon - contact_duration);

    std::vector<Contact> contacts;
    contacts.reserve(2 * static_cast<size_t>(bidirectional_contacts));
    int next_id = 0;
    for (int k = 0; k < bidirectional_contacts; ++k) {
        int a = pick_a(rng);
        int b = pick_b(rng);
        if (b >= a) ++b;  // uniform unordered pair, a != b
        Tick start = pick_start(rng);
        Tick end = start + contact_duration;
        contacts.push_back({next_id++, a, b, start, end, t_prop});
        contacts.push_back({next_id++, b, a, start, end, t_prop});
    }
    return ContactPlan(node_count, std::move(contacts), horizon);
}

bool ContactPlan::operator==(const ContactPlan& other) const {
    if (node_count_ != other.node_count_ || horizon_ != other.horizon_ ||
        contacts_.size() != other.contacts_.size())
        return false;
    for (size_t i = 0; i < contacts_.size(); ++i) {
        const Contact &a = contacts_[i], &b = other.contacts_[i];
        if (a.id != b.id || a.src != b.src || a.dst != b.dst || a.t_start != b.t_start ||
            a.t_end != b.t_end || a.t_prop != b.t_prop)
            return false;
    }
    return true;
}

}  // namespace dnf
