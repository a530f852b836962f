#include "dnf/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dnf {

namespace {

constexpr std::uint64_t kTagGroundTruth = 0x67742d7374726d01ULL;
constexpr std::uint64_t kTagTxFailures = 0x74782d7374726d02ULL;
constexpr std::uint64_t kTagSolver = 0x736f6c7665722003ULL;
constexpr std::uint64_t kTagPlan = 0x706c616e2d670004ULL;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return splitmix64(splitmix64(master) ^ splitmix64(tag));
}

GroundTruth GroundTruth::sample(const FailureModel& model, int node_count,
                                Tick horizon, std::uint64_t seed) {
    GroundTruth gt;
    gt.p_tx_fail_ = model.p_tx_fail();
    gt.tx_rng_.seed(derive_seed(seed, kTagTxFailures));
    gt.sampled_until_ = static_cast<double>(horizon) + 1024.0;
    std::mt19937_64 rng(derive_seed(seed, kTagGroundTruth));
    std::exponential_distribution<double> fail(model.lambda());
    std::exponential_distribution<double> repair(model.mu());
    gt.toggles_.resize(static_cast<size_t>(node_count));
    for (auto& toggles : gt.toggles_) {
        double t = 0.0;
        bool operational = true;
        while (t <= gt.sampled_until_) {
            t += operational ? fail(rng) : repair(rng);
            toggles.push_back(t);
            operational = !operational;
        }
    }
    return gt;
}

bool GroundTruth::functional_at(NodeId node, Tick t) const {
    const auto& toggles = toggles_.at(static_cast<size_t>(node));
    const double td = static_cast<double>(t);
    if (td > sampled_until_)
        throw std::out_of_range("ground truth queried beyond sampled horizon");
    const auto count = std::upper_bound(toggles.begin(), toggles.end(), td) - toggles.begin();
    return count % 2 == 0;
}

bool GroundTruth::draw_tx_failure() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(tx_rng_) < p_tx_fail_;
}

std::string router_name(RouterKind kind) {
    switch (kind) {
        case RouterKind::Dnf: return "dnf";
        case RouterKind::Cgr: return "cgr";
        case RouterKind::CgrCr: return "cgr-cr";
    }
    return "?";
}

namespace {

struct Event {
    Tick tick;
    int bundle;
    int kind;  // 0 = routing decision
    bool operator>(const Event& o) const {
        if (tick != o.tick) return tick > o.tick;
        if (bundle != o.bundle) return bundle > o.bundle;
        return kind > o.kind;
    }
};

void log_event(std::vector<BundleEvent>* log, Tick tick, int bundle,
               const char* event, NodeId node, int contact = -1) {
    if (log) log->push_back({tick, bundle, event, node, contact});
}

}  // namespace

SimReport run_simulation(const ContactPlan& plan, const FailureModel& model,
                         const LttgMatrix& lttg, const RouterConfig& router,
                         std::uint64_t seed, std::vector<BundleEvent>* log) {
    GroundTruth gt = GroundTruth::sample(model, plan.node_count(), plan.horizon(), seed);
    const std::uint64_t solver_base = derive_seed(seed, kTagSolver);

    std::vector<Bundle> bundles;
    for (NodeId s = 0; s < plan.node_count(); ++s)
        for (NodeId d = 0; d < plan.node_count(); ++d) {
            if (s == d) continue;
            Bundle b;
            b.id = static_cast<int>(bundles.size());
            b.source = s;
            b.destination = d;
            b.current_node = s;
            bundles.push_back(std::move(b));
        }

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
    for (const Bundle& b : bundles) {
        log_event(log, 0, b.id, "created", b.source);
        queue.push({b.creation_time, b.id, 0});
    }

    SimReport report;
    report.created = static_cast<int>(bundles.size());
    double sum_delay = 0.0, sum_hops = 0.0;
    double sum_ms = 0.0, sum_ms_sq = 0.0;
    long long decision_counter = 0;

    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        Bundle& b = bundles[static_cast<size_t>(ev.bundle)];
        if (b.status != BundleStatus::InTransit) continue;
        const NodeId here = b.current_node;
        const Tick now = ev.tick;

        if (!lttg.reachable(here, b.destination, now)) {
            b.status = BundleStatus::Lost;
            log_event(log, now, b.id, "lost", here);
            continue;
        }

        // router decision (timed)
        int contact_id = -1;
        const auto t0 = std::chrono::steady_clock::now();
        if (router.kind == RouterKind::Dnf) {
            RoutingProblem problem{&plan, &model, &lttg, here, now,
                                   b.destination, b.obs_history, router.rewards};
            DnfModel dnf_model(problem);
            SolverConfig cfg = router.solver;
            cfg.seed = derive_seed(solver_base, static_cast<std::uint64_t>(decision_counter));
            Planner<DnfModel> planner(dnf_model, cfg);
            DnfAction action = planner.plan(initial_belief(problem).support());
            if (!action.is_terminal()) contact_id = action.contact_id;
        } else {
            auto route = cgr_best_route(plan, here, now, b.destination);
            if (route && !route->hops.empty()) contact_id = route->hops.front();
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        sum_ms += ms;
        sum_ms_sq += ms * ms;
        ++decision_counter;

        if (contact_id < 0) {
            b.status = BundleStatus::Lost;
            log_event(log, now, b.id, "lost", here);
            continue;
        }

        const Contact& c = plan.contact_by_id(contact_id);
        const Tick t_store = std::max<Tick>(0, c.t_start - now);
        const Tick t_succ = now + t_store + c.t_prop;
        const Tick t_fail = t_succ + c.t_prop + 1;

        ++b.transmission_count;
        ++report.transmissions;
        log_event(log, now, b.id, "transmit", here, c.id);

        const bool receiver_up = gt.functional_at(c.dst, t_succ);
        const bool tx_failed = gt.draw_tx_failure();
        if (receiver_up && !tx_failed) {
            b.current_node = c.dst;
            ++b.hop_count;
            if (router.kind == RouterKind::Dnf)
                b.obs_history.record(c.dst, t_succ, FunctionalState::Operational);
            if (c.dst == b.destination) {
                b.status = BundleStatus::Delivered;
                b.delivery_time = t_succ;
                log_event(log, t_succ, b.id, "delivered", c.dst);
            } else {
                queue.push({t_succ, b.id, 0});
            }
        } else {
            log_event(log, t_fail, b.id, "tx_failed", here, c.id);
            if (router.kind == RouterKind::Dnf)
                b.obs_history.record(c.dst, t_succ, FunctionalState::Failed);
            if (router.kind == RouterKind::Cgr) {
                // no custody reports: a single failed transmission loses the bundle
                b.status = BundleStatus::Lost;
                log_event(log, t_fail, b.id, "lost", here);
            } else {
                queue.push({t_fail, b.id, 0});
            }
        }
    }

    for (const Bundle& b : bundles) {
        if (b.status != BundleStatus::Delivered) continue;
        ++report.delivered;
        sum_delay += static_cast<double>(b.delivery_time - b.creation_time);
        sum_hops += b.hop_count;
    }
    report.delivery_ratio =
        report.created ? static_cast<double>(report.delivered) / report.created : 0.0;
    report.energy_efficiency =
        static_cast<double>(report.delivered) / static_cast<double>(std::max<long long>(1, report.transmissions));
    report.mean_delay = report.delivered ? sum_delay / report.delivered : 0.0;
    report.mean_hops = report.delivered ? sum_hops / report.delivered : 0.0;
    report.decisions = decision_counter;
    if (decision_counter > 0) {
        report.mean_decision_ms = sum_ms / static_cast<double>(decision_counter);
        report.decision_ms_variance =
            sum_ms_sq / static_cast<double>(decision_counter) -
            report.mean_decision_ms * report.mean_decision_ms;
    }
    return report;
}

namespace {

struct RunTask {
    size_t cell;
    size_t plan_index;  // into per-seed plan cache
    double mtbf, mttr, ptx;
    RouterKind router;
    std::uint64_t seed;
};

}  // namespace

std::vector<SweepCell> run_sweep(const SweepConfig& config) {
    if (config.mtbf_values.empty() || config.mttr_values.empty() ||
        config.ptx_values.empty() || config.routers.empty() || config.seeds.empty())
        throw std::invalid_argument("run_sweep: empty parameter list");

    // one plan per seed, shared by every cell
    std::vector<ContactPlan> plans;
    std::vector<LttgMatrix> lttgs;
    plans.reserve(config.seeds.size());
    for (std::uint64_t seed : config.seeds) {
        if (config.plan.fixed) {
            plans.push_back(*config.plan.fixed);
        } else {
            plans.push_back(ContactPlan::generate(
                config.plan.node_count, config.plan.bidirectional_contacts,
                config.plan.horizon, config.plan.contact_duration,
                config.plan.t_prop, derive_seed(seed, kTagPlan)));
        }
        lttgs.push_back(LttgMatrix::compute(plans.back()));
    }

    std::vector<SweepCell> cells;
    std::vector<RunTask> tasks;
    for (RouterKind router : config.routers)
        for (double mtbf : config.mtbf_values)
            for (double mttr : config.mttr_values)
                for (double ptx : config.ptx_values) {
                    SweepCell cell;
                    cell.router = router;
                    cell.mtbf = mtbf;
                    cell.mttr = mttr;
                    cell.ptx = ptx;
                    cell.seed_count = static_cast<int>(config.seeds.size());
                    const size_t ci = cells.size();
                    cells.push_back(cell);
                    for (size_t si = 0; si < config.seeds.size(); ++si)
                        tasks.push_back({ci, si, mtbf, mttr, ptx, router, config.seeds[si]});
                }

    std::vector<SimReport> results(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const RunTask& task = tasks[i];
            FailureModel model = FailureModel::from_mtbf_mttr(task.mtbf, task.mttr,
                                                              task.ptx, config.epsilon);
            RouterConfig router{task.router, config.solver, config.rewards};
            results[i] = run_simulation(plans[task.plan_index], model,
                                        lttgs[task.plan_index], router, task.seed);
        }
    };
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // deterministic seed-average reduction, independent of completion order
    std::vector<int> counts(cells.size(), 0);
    for (size_t i = 0; i < tasks.size(); ++i) {
        SimReport& mean = cells[tasks[i].cell].mean;
        const SimReport& r = results[i];
        mean.created += r.created;
        mean.delivered += r.delivered;
        mean.transmissions += r.transmissions;
        mean.delivery_ratio += r.delivery_ratio;
        mean.energy_efficiency += r.energy_efficiency;
        mean.mean_delay += r.mean_delay;
        mean.mean_hops += r.mean_hops;
        mean.mean_decision_ms += r.mean_decision_ms;
        mean.decisions += r.decisions;
        ++counts[tasks[i].cell];
    }
    for (size_t ci = 0; ci < cells.size(); ++ci) {
        const double k = static_cast<double>(std::max(1, counts[ci]));
        SimReport& m = cells[ci].mean;
        m.delivery_ratio /= k;
        m.energy_efficiency /= k;
        m.mean_delay /= k;
        m.mean_hops /= k;
        m.mean_decision_ms /= k;
    }
    return cells;
}

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepCell>& cells, bool include_timing) {
    std::ostringstream os;
    os << "router,mtbf,mttr,ptx,seed_count,delivery_ratio,transmissions,"
          "energy_efficiency,mean_delay,mean_hops,mean_decision_ms\n";
    for (const SweepCell& c : cells) {
        const double mean_tx = c.seed_count
                                   ? static_cast<double>(c.mean.transmissions) / c.seed_count
                                   : 0.0;
        os << router_name(c.router) << ',' << fmt6(c.mtbf) << ',' << fmt6(c.mttr)
           << ',' << fmt6(c.ptx) << ',' << c.seed_count << ','
           << fmt6(c.mean.delivery_ratio) << ',' << fmt6(mean_tx) << ','
           << fmt6(c.mean.energy_efficiency) << ',' << fmt6(c.mean.mean_delay)
           << ',' << fmt6(c.mean.mean_hops) << ','
           << fmt6(include_timing ? c.mean.mean_decision_ms : 0.0) << '\n';
    }
    return os.str();
}

}  // namespace dnf
