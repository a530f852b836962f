#include "dnf/dnf_pomdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dnf {

std::optional<Observation> ObservationHistory::lookup(NodeId node) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), node,
                               [](const Entry& e, NodeId n) { return e.node < n; });
    if (it == entries_.end() || it->node != node) return std::nullopt;
    return Observation{it->tick, it->state};
}

void ObservationHistory::record(NodeId node, Tick tick, FunctionalState state) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), node,
                               [](const Entry& e, NodeId n) { return e.node < n; });
    if (it != entries_.end() && it->node == node) {
        it->tick = tick;
        it->state = state;
    } else {
        entries_.insert(it, Entry{node, tick, state});
    }
}

ObservationHistory ObservationHistory::with(NodeId node, Tick tick,
                                            FunctionalState state) const {
    ObservationHistory copy = *this;
    copy.record(node, tick, state);
    return copy;
}

Belief::Belief(std::vector<std::pair<DnfState, double>> support)
    : support_(std::move(support)) {
    if (support_.empty()) throw std::invalid_argument("belief: empty support");
    double sum = 0.0;
    const DnfState* first_network = nullptr;
    for (const auto& [s, w] : support_) {
        if (!(w > 0.0)) throw std::invalid_argument("belief: non-positive weight");
        sum += w;
        if (!s.trap) {
            if (!first_network) {
                first_network = &s;
            } else if (s.node != first_network->node || s.time != first_network->time) {
                throw std::invalid_argument("belief: states disagree on node/time");
            }
        }
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("belief: weights do not sum to 1");
}

Belief initial_belief(const RoutingProblem& problem) {
    DnfState s = DnfState::network(problem.current_node, problem.current_time,
                                   problem.initial_obs);
    return Belief({{std::move(s), 1.0}});
}

std::vector<DnfAction> available_actions(const RoutingProblem& problem,
                                         const DnfState& state) {
    if (state.trap) return {DnfAction::terminal()};
    if (state.node == problem.destination) return {DnfAction::terminal()};
    if (!problem.lttg->reachable(state.node, problem.destination, state.time))
        return {DnfAction::terminal()};
    auto contacts = problem.plan->schedulable_contacts(state.node, state.time);
    if (contacts.empty()) return {DnfAction::terminal()};
    std::vector<DnfAction> actions;
    actions.reserve(contacts.size());
    for (const Contact& c : contacts) actions.push_back(DnfAction::contact(c.id));
    return actions;
}

double reward(const RoutingProblem& problem, const DnfState& state) {
    if (state.trap) return 0.0;
    if (state.node == problem.destination) {
        const double horizon = static_cast<double>(problem.plan->horizon());
        if (horizon <= 0.0) return problem.rewards.r_goal_max;
        return problem.rewards.r_goal_max * (1.0 - static_cast<double>(state.time) / horizon);
    }
    if (!problem.lttg->reachable(state.node, problem.destination, state.time))
        return problem.rewards.r_all_stuck;
    return 0.0;
}

namespace {

bool action_enabled(const RoutingProblem& problem, const DnfState& state,
                    const Contact& c) {
    return !state.trap && c.src == state.node && c.t_end >= state.time &&
           state.node != problem.destination &&
           problem.lttg->reachable(state.node, problem.destination, state.time);
}

}  // namespace

std::vector<Outcome> transition(const RoutingProblem& problem, const DnfState& state,
                                const DnfAction& action) {
    if (action.is_terminal()) {
        // atGoal/allStuck is granted when leaving the state for the trap;
        // the trap then self-loops with reward 0
        const double r = state.trap ? 0.0 : reward(problem, state);
        return {Outcome{DnfState::trap_state(), DnfObservation::Failure, 1.0, r}};
    }
    const Contact& c = problem.plan->contact_by_id(action.contact_id);
    if (!action_enabled(problem, state, c))
        throw std::logic_error("transition: action not enabled in state");

    const Tick t = state.time;
    const Tick t_store = std::max<Tick>(0, c.t_start - t);
    const Tick t_succ = t + t_store + c.t_prop;
    const Tick t_fail = t_succ + c.t_prop + 1;

    const double p_op =
        problem.model->predict_functional(state.obs.lookup(c.dst), t_succ);
    const double p_tx = problem.model->p_tx_fail();
    const double p_success = p_op * (1.0 - p_tx);
    const double p_tx_failure = p_op * p_tx;
    const double p_node_failure = 1.0 - p_op;

    ObservationHistory obs_up = state.obs.with(c.dst, t_succ, FunctionalState::Operational);
    ObservationHistory obs_down = state.obs.with(c.dst, t_succ, FunctionalState::Failed);

    DnfState s_success = DnfState::network(c.dst, t_succ, std::move(obs_up));
    DnfState s_node_fail = DnfState::network(c.src, t_fail, std::move(obs_down));
    // transmission failure: located like the failure state, but remembers the
    // receiver as operational -- the source of partial observability
    DnfState s_tx_fail = DnfState::network(c.src, t_fail, s_success.obs);

    std::vector<Outcome> out;
    out.reserve(3);
    double r_success = reward(problem, s_success);
    double r_node_fail = reward(problem, s_node_fail);
    double r_tx_fail = reward(problem, s_tx_fail);
    out.push_back({std::move(s_success), DnfObservation::Success, p_success, r_success});
    out.push_back({std::move(s_node_fail), DnfObservation::Failure, p_node_failure, r_node_fail});
    out.push_back({std::move(s_tx_fail), DnfObservation::Failure, p_tx_failure, r_tx_fail});
    return out;
}

Belief update_belief(const RoutingProblem& problem, const Belief& belief,
                     const DnfAction& action, DnfObservation z) {
    struct StateLess {
        bool operator()(const DnfState& a, const DnfState& b) const { return a < b; }
    };
    std::map<DnfState, double, StateLess> acc;
    double p_z = 0.0;
    for (const auto& [s, w] : belief.support()) {
        for (const Outcome& o : transition(problem, s, action)) {
            if (o.obs != z || o.probability <= 0.0) continue;
            acc[o.state] += w * o.probability;
            p_z += w * o.probability;
        }
    }
    if (p_z <= 0.0)
        throw std::invalid_argument("update_belief: observation has probability 0");
    std::vector<std::pair<DnfState, double>> support;
    support.reserve(acc.size());
    for (auto& [s, w] : acc) support.emplace_back(s, w / p_z);
    return Belief(std::move(support));
}

double expected_reward(const RoutingProblem& problem, const Belief& belief,
                       const DnfAction& action) {
    double r = 0.0;
    for (const auto& [s, w] : belief.support())
        for (const Outcome& o : transition(problem, s, action))
            r += w * o.probability * o.reward;
    return r;
}

}  // namespace dnf
