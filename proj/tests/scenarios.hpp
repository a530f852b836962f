// Random routing scenarios shared between the unit and acceptance suites:
// a small random plan plus a belief reached by a short random
// action/observation walk from the initial point belief.
#pragma once

#include <optional>
#include <random>

#include "dnf/dnf_pomdp.hpp"
#include "oracles.hpp"

struct RandomScenario {
    dnf::ContactPlan plan;
    dnf::FailureModel model;
    dnf::LttgMatrix lttg;
    dnf::RoutingProblem problem;
    dnf::Belief belief;

    RandomScenario(dnf::ContactPlan p, dnf::FailureModel m, std::mt19937_64& rng)
        : plan(std::move(p)), model(std::move(m)), lttg(dnf::LttgMatrix::compute(plan)),
          belief(std::vector<std::pair<dnf::DnfState, double>>{
              {dnf::DnfState::network(0, 0), 1.0}}) {
        problem.plan = &plan;
        problem.model = &model;
        problem.lttg = &lttg;
        problem.current_node = static_cast<dnf::NodeId>(rng() % plan.node_count());
        problem.current_time = static_cast<dnf::Tick>(rng() % (plan.horizon() + 1));
        problem.destination = static_cast<dnf::NodeId>(rng() % plan.node_count());
        belief = dnf::initial_belief(problem);
        const int steps = static_cast<int>(rng() % 3);
        for (int i = 0; i < steps; ++i) {
            auto action = pick_action(rng);
            if (!action || action->is_terminal()) break;
            auto z = pick_observation(rng, *action);
            if (!z) break;
            belief = dnf::update_belief(problem, belief, *action, *z);
        }
    }

    std::optional<dnf::DnfAction> pick_action(std::mt19937_64& rng) const {
        auto actions = dnf::available_actions(problem, belief.support().front().first);
        if (actions.empty()) return std::nullopt;
        return actions[rng() % actions.size()];
    }

    std::optional<dnf::DnfObservation> pick_observation(std::mt19937_64& rng,
                                                        const dnf::DnfAction& a) const {
        double p_succ = 0.0, p_fail = 0.0;
        for (const auto& [s, w] : belief.support())
            for (const auto& o : dnf::transition(problem, s, a))
                (o.obs == dnf::DnfObservation::Success ? p_succ : p_fail) +=
                    w * o.probability;
        const bool want_fail = (rng() % 2) == 0;
        if (want_fail && p_fail > 1e-12) return dnf::DnfObservation::Failure;
        if (p_succ > 1e-12) return dnf::DnfObservation::Success;
        if (p_fail > 1e-12) return dnf::DnfObservation::Failure;
        return std::nullopt;
    }
};

inline RandomScenario make_random_scenario(std::mt19937_64& rng) {
    for (;;) {
        try {
            auto plan = oracle::random_small_plan(rng, 5, 6, 15);
            double mtbf = 5.0 + static_cast<double>(rng() % 40);
            double mttr = 5.0 + static_cast<double>(rng() % 40);
            double ptx = static_cast<double>(rng() % 30) / 100.0;
            return RandomScenario(std::move(plan),
                                  dnf::FailureModel::from_mtbf_mttr(mtbf, mttr, ptx), rng);
        } catch (const std::exception&) {
            // degenerate draw (e.g. no contacts); try again
        }
    }
}
