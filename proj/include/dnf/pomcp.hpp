#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace dnf {

/// PO-UCT search parameters. Defaults match the benchmark configuration:
/// 10000 simulations, exploration constant 100, depth 50.
struct SolverConfig {
    enum class Rollout { RewardEstimate, RandomPolicy };

    int iterations = 10000;
    double exploration_c = 100.0;
    int max_depth = 50;
    double discount = 0.95;
    std::uint64_t seed = 0;
    Rollout rollout = Rollout::RewardEstimate;
};

/// Monte-Carlo tree search over action/observation histories (PO-UCT).
///
/// `Model` must provide:
///   State, Action (ordered the way ties should break, terminal last)
///   bool is_terminal(State)
///   std::vector<Action> actions(State)
///   StepResult { State state; int observation_key; double reward; }
///       step(State, Action, Rng&)
///   double estimate(State)
///
/// One Planner instance runs one decision; reuse requires a fresh instance.
template <class Model>
class Planner {
public:
    using State = typename Model::State;
    using Action = typename Model::Action;

    Planner(const Model& model, SolverConfig config)
        : model_(&model), config_(config), rng_(config.seed) {
        if (config_.iterations < 1) throw std::invalid_argument("pomcp: iterations < 1");
        if (config_.max_depth < 1) throw std::invalid_argument("pomcp: max_depth < 1");
        if (config_.exploration_c < 0.0)
            throw std::invalid_argument("pomcp: negative exploration constant");
    }

    /// Runs the configured number of simulations from the (exact) root belief
    /// and returns the root action with maximal Q. Deterministic per seed.
    Action plan(const std::vector<std::pair<State, double>>& belief) {
        if (belief.empty()) throw std::invalid_argument("pomcp: empty belief");
        nodes_.clear();
        nodes_.emplace_back();
        for (int i = 0; i < config_.iterations; ++i) {
            State s = sample_belief(belief);
            if (i == 0) nodes_[0].particles.push_back(s);
            simulate(std::move(s), 0, 0);
        }
        const BeliefNode& root = nodes_[0];
        if (root.actions.empty()) throw std::logic_error("pomcp: no enabled action at root");
        size_t best = 0;
        for (size_t a = 1; a < root.actions.size(); ++a)
            if (root.actions[a].q > root.actions[best].q) best = a;
        return root.actions[best].action;
    }

    /// Root-level action statistics of the last plan() call.
    struct ActionStat {
        Action action;
        int visits;
        double q;
    };
    std::vector<ActionStat> root_stats() const {
        std::vector<ActionStat> out;
        if (nodes_.empty()) return out;
        for (const auto& an : nodes_[0].actions)
            out.push_back({an.action, an.n, an.q});
        return out;
    }

    size_t tree_size() const { return nodes_.size(); }

private:
    struct ActionNode {
        Action action;
        int n = 0;
        double q = 0.0;
        std::map<int, size_t> children;  // observation key -> belief node index
    };
    struct BeliefNode {
        int n = 0;
        bool expanded = false;
        std::vector<ActionNode> actions;
        std::vector<State> particles;
    };

    State sample_belief(const std::vector<std::pair<State, double>>& belief) {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        size_t pick = 0;
        for (size_t i = 0; i < belief.size(); ++i) {
            pick = i;
            u -= belief[i].second;
            if (u <= 0.0) break;
        }
        return belief[pick].first;
    }

    double rollout(State s, int depth) {
        if (config_.rollout == SolverConfig::Rollout::RewardEstimate)
            return model_->estimate(s);
        double total = 0.0;
        double gamma = 1.0;
        while (depth < config_.max_depth && !model_->is_terminal(s)) {
            auto actions = model_->actions(s);
            size_t pick = std::uniform_int_distribution<size_t>(0, actions.size() - 1)(rng_);
            auto step = model_->step(s, actions[pick], rng_);
            total += gamma * step.reward;
            gamma *= config_.discount;
            s = std::move(step.state);
            ++depth;
        }
        return total;
    }

    double simulate(State s, size_t node_idx, int depth) {
        if (model_->is_terminal(s)) return 0.0;
        if (depth >= config_.max_depth) return model_->estimate(s);

        if (!nodes_[node_idx].expanded) {
            auto actions = model_->actions(s);
            auto& node = nodes_[node_idx];
            node.expanded = true;
            node.actions.reserve(actions.size());
            for (auto& a : actions) node.actions.push_back(ActionNode{std::move(a)});
            if (depth > 0) {
                node.n += 1;
                return rollout(std::move(s), depth);
            }
        }

        const size_t a_idx = select_ucb(node_idx);
        auto step = model_->step(s, nodes_[node_idx].actions[a_idx].action, rng_);

        size_t child;
        {
            auto& an = nodes_[node_idx].actions[a_idx];
            auto it = an.children.find(step.observation_key);
            if (it == an.children.end()) {
                child = nodes_.size();
                an.children.emplace(step.observation_key, child);
                nodes_.emplace_back();
            } else {
                child = it->second;
            }
        }

        double ret = step.reward;
        if (!model_->is_terminal(step.state))
            ret += config_.discount * simulate(std::move(step.state), child, depth + 1);

        auto& node = nodes_[node_idx];
        node.n += 1;
        auto& an = node.actions[a_idx];
        an.n += 1;
        an.q += (ret - an.q) / an.n;
        return ret;
    }

    size_t select_ucb(size_t node_idx) {
        const BeliefNode& node = nodes_[node_idx];
        size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        const double log_n = std::log(static_cast<double>(std::max(1, node.n)));
        for (size_t a = 0; a < node.actions.size(); ++a) {
            const ActionNode& an = node.actions[a];
            if (an.n == 0) return a;  // untried first, in action order
            const double score =
                an.q + config_.exploration_c * std::sqrt(log_n / an.n);
            if (score > best_score) {
                best_score = score;
                best = a;
            }
        }
        return best;
    }

    const Model* model_;
    SolverConfig config_;
    std::mt19937_64 rng_;
    std::vector<BeliefNode> nodes_;
};

}  // namespace dnf
