#pragma once

#include <array>
#include <optional>
#include <utility>

#include "dnf/contact_plan.hpp"

namespace dnf {

enum class FunctionalState { Operational, Failed };

/// Last known functional state of a node, timestamped with the observation tick.
struct Observation {
    Tick tick = 0;
    FunctionalState state = FunctionalState::Operational;
};

/// Two-state repairable-system CTMC with failure rate lambda (1/MTBF) and
/// repair rate mu (1/MTTR), plus an independent per-transmission failure
/// probability. Predictions beyond the derived cut-off time fall back to the
/// steady-state distribution (within epsilon of the exact value).
class FailureModel {
public:
    FailureModel(double lambda, double mu, double p_tx_fail,
                 double epsilon = 1e-3, bool cutoff_enabled = true);

    static FailureModel from_mtbf_mttr(double mtbf, double mttr, double p_tx_fail,
                                       double epsilon = 1e-3, bool cutoff_enabled = true) {
        return FailureModel(1.0 / mtbf, 1.0 / mttr, p_tx_fail, epsilon, cutoff_enabled);
    }

    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    double p_tx_fail() const { return p_tx_fail_; }
    double epsilon() const { return epsilon_; }
    Tick t_cutoff() const { return t_cutoff_; }
    bool cutoff_enabled() const { return cutoff_enabled_; }

    /// P(t) = e^{Qt}; row i is the distribution over {Operational, Failed} at
    /// time t given state i at time 0. Index 0 = Operational, 1 = Failed.
    std::array<std::array<double, 2>, 2> transition_matrix(double t) const;

    /// (pi_op, pi_fail) = (mu, lambda) / (lambda + mu).
    std::pair<double, double> steady_state() const;

    /// Smallest integer tick strictly above -ln(eps*(l+m)/l)/(l+m); 0 when the
    /// bound is non-positive. |P_op,op(t) - pi_op| <= eps for all t >= cutoff.
    Tick derive_cutoff() const;

    /// Probability that the node is operational at `arrival`, given its last
    /// observation (or the steady state when there is none or the observation
    /// is older than the cut-off).
    double predict_functional(std::optional<Observation> last_obs, Tick arrival) const;

    /// p_functional * (1 - p_tx_fail).
    double transmission_success_probability(double p_functional) const;

private:
    double lambda_;
    double mu_;
    double p_tx_fail_;
    double epsilon_;
    bool cutoff_enabled_;
    Tick t_cutoff_;
    // per-delta-t cache of P(dt) rows, filled up to the cut-off
    std::vector<double> p_op_given_op_;
    std::vector<double> p_op_given_fail_;
};

}  // namespace dnf
