#include "dnf/failure_model.hpp"

#include <cmath>
#include <stdexcept>

namespace dnf {

FailureModel::FailureModel(double lambda, double mu, double p_tx_fail,
                           double epsilon, bool cutoff_enabled)
    : lambda_(lambda), mu_(mu), p_tx_fail_(p_tx_fail), epsilon_(epsilon),
      cutoff_enabled_(cutoff_enabled) {
    if (!(lambda_ > 0.0) || !(mu_ > 0.0))
        throw std::invalid_argument("failure model: lambda and mu must be positive");
    if (p_tx_fail_ < 0.0 || p_tx_fail_ > 1.0)
        throw std::invalid_argument("failure model: p_tx_fail must be in [0,1]");
    if (!(epsilon_ > 0.0))
        throw std::invalid_argument("failure model: epsilon must be positive");
    t_cutoff_ = derive_cutoff();
    if (cutoff_enabled_ && t_cutoff_ <= (1 << 20)) {
        p_op_given_op_.reserve(static_cast<size_t>(t_cutoff_));
        p_op_given_fail_.reserve(static_cast<size_t>(t_cutoff_));
        for (Tick dt = 0; dt < t_cutoff_; ++dt) {
            auto p = transition_matrix(static_cast<double>(dt));
            p_op_given_op_.push_back(p[0][0]);
            p_op_given_fail_.push_back(p[1][0]);
        }
    }
}

std::array<std::array<double, 2>, 2> FailureModel::transition_matrix(double t) const {
    const double s = lambda_ + mu_;
    const double e = std::exp(-s * t);
    const double pi_op = mu_ / s;
    const double pi_fail = lambda_ / s;
    return {{{pi_op + pi_fail * e, pi_fail - pi_fail * e},
             {pi_op - pi_op * e, pi_fail + pi_op * e}}};
}

std::pair<double, double> FailureModel::steady_state() const {
    const double s = lambda_ + mu_;
    return {mu_ / s, lambda_ / s};
}

Tick FailureModel::derive_cutoff() const {
    const double s = lambda_ + mu_;
    const double arg = epsilon_ * s / lambda_;
    if (arg >= 1.0) return 0;
    const double bound = -std::log(arg) / s;
    return static_cast<Tick>(std::floor(bound)) + 1;
}

double FailureModel::predict_functional(std::optional<Observation> last_obs,
                                        Tick arrival) const {
    const double pi_op = mu_ / (lambda_ + mu_);
    if (!last_obs) return pi_op;
    if (arrival < last_obs->tick)
        throw std::invalid_argument("predict_functional: arrival before observation");
    const Tick dt = arrival - last_obs->tick;
    if (cutoff_enabled_ && dt >= t_cutoff_) return pi_op;
    const size_t row = last_obs->state == FunctionalState::Operational ? 0 : 1;
    if (cutoff_enabled_ && static_cast<size_t>(dt) < p_op_given_op_.size())
        return row == 0 ? p_op_given_op_[static_cast<size_t>(dt)]
                        : p_op_given_fail_[static_cast<size_t>(dt)];
    return transition_matrix(static_cast<double>(dt))[row][0];
}

double FailureModel::transmission_success_probability(double p_functional) const {
    if (p_functional < 0.0 || p_functional > 1.0)
        throw std::invalid_argument("transmission_success_probability: probability out of range");
    return p_functional * (1.0 - p_tx_fail_);
}

}  // namespace dnf
