#pragma once

#include <compare>
#include <optional>
#include <random>
#include <vector>

#include "dnf/contact_plan.hpp"
#include "dnf/failure_model.hpp"
#include "dnf/lttg.hpp"

namespace dnf {

/// Per-node last observed functional state, kept sorted by node id so that
/// equal histories compare equal structurally.
class ObservationHistory {
public:
    struct Entry {
        NodeId node;
        Tick tick;
        FunctionalState state;
        auto operator<=>(const Entry&) const = default;
    };

    ObservationHistory() = default;

    std::optional<Observation> lookup(NodeId node) const;

    /// Copy with the entry for `node` replaced (or inserted).
    ObservationHistory with(NodeId node, Tick tick, FunctionalState state) const;

    void record(NodeId node, Tick tick, FunctionalState state);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    auto operator<=>(const ObservationHistory&) const = default;

private:
    std::vector<Entry> entries_;
};

/// POMDP state: bundle location + time + observation history, or the
/// absorbing trap state entered through the terminal action.
struct DnfState {
    bool trap = false;
    NodeId node = 0;
    Tick time = 0;
    ObservationHistory obs;

    static DnfState trap_state() {
        DnfState s;
        s.trap = true;
        return s;
    }
    static DnfState network(NodeId node, Tick time, ObservationHistory obs = {}) {
        return DnfState{false, node, time, std::move(obs)};
    }

    bool operator==(const DnfState& o) const {
        if (trap != o.trap) return false;
        if (trap) return true;
        return node == o.node && time == o.time && obs == o.obs;
    }
    bool operator<(const DnfState& o) const {
        if (trap != o.trap) return trap < o.trap;
        if (trap) return false;
        if (node != o.node) return node < o.node;
        if (time != o.time) return time < o.time;
        return obs < o.obs;
    }
};

/// Either a transmission over a specific contact, or the terminal action.
struct DnfAction {
    int contact_id = -1;  // -1 = terminal

    static DnfAction terminal() { return DnfAction{-1}; }
    static DnfAction contact(int id) { return DnfAction{id}; }
    bool is_terminal() const { return contact_id < 0; }
    bool operator==(const DnfAction&) const = default;
};

enum class DnfObservation { Success, Failure };

struct RewardParams {
    double r_goal_max = 100.0;
    double r_all_stuck = -100.0;
    double discount = 0.95;
};

/// One routing decision: where the bundle is, where it must go, and
/// everything shared across decisions (plan, failure model, LTTG).
struct RoutingProblem {
    const ContactPlan* plan = nullptr;
    const FailureModel* model = nullptr;
    const LttgMatrix* lttg = nullptr;
    NodeId current_node = 0;
    Tick current_time = 0;
    NodeId destination = 0;
    ObservationHistory initial_obs;
    RewardParams rewards;
};

/// One weighted successor of a transition.
struct Outcome {
    DnfState state;
    DnfObservation obs;
    double probability;
    double reward;
};

/// Discrete distribution over DnfStates; strictly positive weights summing
/// to 1. All network states in one belief share node and time.
class Belief {
public:
    Belief() = default;
    explicit Belief(std::vector<std::pair<DnfState, double>> support);

    const std::vector<std::pair<DnfState, double>>& support() const { return support_; }
    bool empty() const { return support_.empty(); }

private:
    std::vector<std::pair<DnfState, double>> support_;
};

Belief initial_belief(const RoutingProblem& problem);

/// Terminal action for trap/goal/stuck states, otherwise all schedulable
/// contacts as actions (never empty).
std::vector<DnfAction> available_actions(const RoutingProblem& problem, const DnfState& state);

/// Successor distribution for an enabled action: the terminal action moves to
/// the trap state; a contact action yields the success / node-failure /
/// transmission-failure triple.
std::vector<Outcome> transition(const RoutingProblem& problem, const DnfState& state,
                                const DnfAction& action);

/// atGoal reward (linear decay in arrival time), allStuck penalty, else 0.
double reward(const RoutingProblem& problem, const DnfState& state);

/// Exact Bayes belief update; throws std::invalid_argument when the
/// observation has probability 0 under the belief and action.
Belief update_belief(const RoutingProblem& problem, const Belief& belief,
                     const DnfAction& action, DnfObservation z);

/// Probability-weighted transition reward over the belief.
double expected_reward(const RoutingProblem& problem, const Belief& belief,
                       const DnfAction& action);

/// Adapter exposing the DNF model through the generative interface the
/// PO-UCT planner consumes.
class DnfModel {
public:
    using State = DnfState;
    using Action = DnfAction;

    explicit DnfModel(const RoutingProblem& problem) : problem_(&problem) {}

    bool is_terminal(const State& s) const { return s.trap; }
    std::vector<Action> actions(const State& s) const {
        return available_actions(*problem_, s);
    }

    struct StepResult {
        State state;
        int observation_key;
        double reward;
    };

    /// Samples one successor proportionally to the transition distribution.
    template <class Rng>
    StepResult step(const State& s, const Action& a, Rng& rng) const {
        auto outcomes = transition(*problem_, s, a);
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        size_t pick = 0;
        for (size_t i = 0; i < outcomes.size(); ++i) {
            if (outcomes[i].probability <= 0.0) continue;
            pick = i;
            u -= outcomes[i].probability;
            if (u <= 0.0) break;
        }
        const Outcome& o = outcomes[pick];
        return {o.state, o.obs == DnfObservation::Success ? 0 : 1, o.reward};
    }

    /// Leaf-value heuristic: the state's own reward.
    double estimate(const State& s) const {
        if (s.trap) return 0.0;
        return reward(*problem_, s);
    }

    const RoutingProblem& problem() const { return *problem_; }

private:
    const RoutingProblem* problem_;
};

}  // namespace dnf
