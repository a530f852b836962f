#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dnf/baselines.hpp"
#include "dnf/contact_plan.hpp"
#include "dnf/dnf_pomdp.hpp"
#include "dnf/failure_model.hpp"
#include "dnf/lttg.hpp"
#include "dnf/pomcp.hpp"

namespace dnf {

/// Deterministic substream derivation (splitmix64 over master seed + tag).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

/// Hidden truth of one simulation run: per-node CTMC trajectories (alternating
/// exponential operational/failed holding times, all nodes initially
/// operational) plus a dedicated Bernoulli stream for transmission failures.
class GroundTruth {
public:
    static GroundTruth sample(const FailureModel& model, int node_count,
                              Tick horizon, std::uint64_t seed);

    bool functional_at(NodeId node, Tick t) const;

    /// Consumes one draw from the transmission-failure stream.
    bool draw_tx_failure();

private:
    GroundTruth() = default;
    // per node: sorted state-toggle instants; even intervals are operational
    std::vector<std::vector<double>> toggles_;
    double sampled_until_ = 0.0;
    double p_tx_fail_ = 0.0;
    std::mt19937_64 tx_rng_;
};

enum class RouterKind { Dnf, Cgr, CgrCr };

std::string router_name(RouterKind kind);

struct RouterConfig {
    RouterKind kind = RouterKind::Dnf;
    SolverConfig solver;
    RewardParams rewards;
};

struct BundleEvent {
    Tick tick;
    int bundle;
    std::string event;  // created / transmit / delivered / tx_failed / lost
    NodeId node;
    int contact;  // -1 when not applicable
};

enum class BundleStatus { InTransit, Delivered, Lost };

struct Bundle {
    int id;
    NodeId source;
    NodeId destination;
    Tick creation_time = 0;
    NodeId current_node;
    ObservationHistory obs_history;
    int hop_count = 0;
    int transmission_count = 0;
    BundleStatus status = BundleStatus::InTransit;
    Tick delivery_time = 0;
};

struct SimReport {
    int created = 0;
    int delivered = 0;
    long long transmissions = 0;
    double delivery_ratio = 0.0;
    double energy_efficiency = 0.0;
    double mean_delay = 0.0;  // over delivered bundles
    double mean_hops = 0.0;   // over delivered bundles
    double mean_decision_ms = 0.0;
    double decision_ms_variance = 0.0;
    long long decisions = 0;
};

/// All-to-all traffic at tick 0 through the chosen router under the custody
/// model, against sampled ground-truth failures. Deterministic per seed.
SimReport run_simulation(const ContactPlan& plan, const FailureModel& model,
                         const LttgMatrix& lttg, const RouterConfig& router,
                         std::uint64_t seed,
                         std::vector<BundleEvent>* log = nullptr);

/// One plan source per seed: either a fixed plan or the benchmark generator.
struct PlanSource {
    // when `fixed` is set it is used for every seed; otherwise a plan is
    // generated per seed from the generator parameters
    const ContactPlan* fixed = nullptr;
    int node_count = 8;
    int bidirectional_contacts = 70;
    Tick horizon = 100;
    Tick contact_duration = 10;
    Tick t_prop = 2;
};

struct SweepCell {
    RouterKind router;
    double mtbf;
    double mttr;
    double ptx;
    int seed_count = 0;
    SimReport mean;  // metrics averaged over seeds
};

struct SweepConfig {
    PlanSource plan;
    std::vector<double> mtbf_values;
    std::vector<double> mttr_values;
    std::vector<double> ptx_values;
    std::vector<RouterKind> routers;
    std::vector<std::uint64_t> seeds;
    double epsilon = 1e-3;
    SolverConfig solver;
    RewardParams rewards;
    int jobs = 1;
    bool include_timing = true;  // report 0 in the timing column when false
};

/// Cartesian product over (mtbf, mttr, ptx, router), seed-averaged. Cells are
/// independent; `jobs` > 1 runs them in parallel with identical results.
std::vector<SweepCell> run_sweep(const SweepConfig& config);

/// Fixed-schema CSV for the sweep results (6 significant digits).
std::string sweep_csv(const std::vector<SweepCell>& cells, bool include_timing);

}  // namespace dnf
